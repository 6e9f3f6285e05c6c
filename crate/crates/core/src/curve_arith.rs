//! Point counting over F_p and Dirichlet coefficients a_p for elliptic
//! curves in long Weierstrass form.
//!
//! The counting convention includes singular points of the reduced cubic,
//! so `a_p = p + 1 - #E(F_p)` holds at good and bad primes alike for
//! globally minimal models (split multiplicative reduction gives 1,
//! nonsplit -1, additive 0).

use rayon::prelude::*;

/// Coefficients of y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeierstrassCoefficients {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
}

impl WeierstrassCoefficients {
    pub fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Self {
        Self { a1, a2, a3, a4, a6 }
    }

    /// Coefficients as the `[a1, a2, a3, a4, a6]` list used by the databases.
    pub fn ainvs(&self) -> [i64; 5] {
        [self.a1, self.a2, self.a3, self.a4, self.a6]
    }
}

/// The first `len` primes in ascending order.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieve the first `m` primes.
    pub fn new(m: usize) -> Self {
        assert!(m >= 1, "prime table must hold at least one prime");
        Self { primes: sieve_first_primes(m) }
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Prime at 0-based position `i`.
    pub fn get(&self, i: usize) -> u64 {
        self.primes[i]
    }
}

/// The n-th prime, 1-based: `nth_prime(1) = 2`, `nth_prime(1000) = 7919`.
pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1, "prime indices are 1-based");
    sieve_first_primes(n)[n - 1]
}

fn sieve_first_primes(m: usize) -> Vec<u64> {
    // Upper bound on p_m: m(ln m + ln ln m) for m >= 6.
    let bound = if m < 6 {
        15usize
    } else {
        let mf = m as f64;
        (mf * (mf.ln() + mf.ln().ln())).ceil() as usize + 16
    };
    let mut composite = vec![false; bound + 1];
    let mut primes = Vec::with_capacity(m);
    let mut i = 2usize;
    loop {
        while i <= bound {
            if !composite[i] {
                primes.push(i as u64);
                if primes.len() == m {
                    return primes;
                }
                let mut j = i * i;
                while j <= bound {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        unreachable!("sieve bound too small for {m} primes");
    }
}

/// Quadratic-character lookup table for an odd prime p:
/// `chi[t]` is 0 if t = 0, 1 if t is a nonzero square mod p, -1 otherwise.
#[derive(Debug, Clone)]
pub struct ResidueTable {
    p: u64,
    chi: Vec<i8>,
}

impl ResidueTable {
    pub fn new(p: u64) -> Self {
        debug_assert!(p > 3);
        let mut chi = vec![-1i8; p as usize];
        chi[0] = 0;
        let mut t = 1u64;
        while t <= p / 2 {
            chi[((t * t) % p) as usize] = 1;
            t += 1;
        }
        Self { p, chi }
    }

    #[inline]
    fn chi(&self, t: u64) -> i64 {
        self.chi[t as usize] as i64
    }
}

fn mod_p(v: i64, p: u64) -> u64 {
    v.rem_euclid(p as i64) as u64
}

/// Short-form coefficients (A, B) of y^2 = x^3 + Ax + B equivalent to the
/// long model mod p, valid only for p > 3.
fn short_form_mod_p(c: &WeierstrassCoefficients, p: u64) -> (u64, u64) {
    let a1 = mod_p(c.a1, p);
    let a2 = mod_p(c.a2, p);
    let a3 = mod_p(c.a3, p);
    let a4 = mod_p(c.a4, p);
    let a6 = mod_p(c.a6, p);
    let mul = |a: u64, b: u64| a * b % p;
    let b2 = (mul(a1, a1) + 4 * a2) % p;
    let b4 = (2 * a4 + mul(a1, a3)) % p;
    let b6 = (mul(a3, a3) + 4 * a6) % p;
    let c4 = (mul(b2, b2) + p - mul(24 % p, b4) % p) % p;
    let c6 = (2 * p * p + mul(36 % p, mul(b2, b4)) - mul(mul(b2, b2), b2) - mul(216 % p, b6) % p) % p;
    // y^2 = x^3 - 27*c4*x - 54*c6
    let a = (p - mul(27 % p, c4)) % p;
    let b = (p - mul(54 % p, c6)) % p;
    (a, b)
}

/// Affine-plus-infinity point count by brute force over all (x, y) in F_p^2.
/// Works at any prime and any reduction type; O(p^2), intended for small p
/// and as the independent oracle in tests.
pub fn exhaustive_count_points(c: &WeierstrassCoefficients, p: u64) -> u64 {
    let a1 = mod_p(c.a1, p);
    let a2 = mod_p(c.a2, p);
    let a3 = mod_p(c.a3, p);
    let a4 = mod_p(c.a4, p);
    let a6 = mod_p(c.a6, p);
    let mut count = 1; // point at infinity
    for x in 0..p {
        let x2 = x * x % p;
        let rhs = (x2 * x % p + a2 * x2 % p + a4 * x % p + a6) % p;
        for y in 0..p {
            let lhs = (y * y % p + a1 * x % p * y % p + a3 * y % p) % p;
            if lhs == rhs {
                count += 1;
            }
        }
    }
    count
}

/// Number of projective F_p-points of the reduced cubic, singular points
/// included.
pub fn count_points(c: &WeierstrassCoefficients, p: u64) -> u64 {
    if p <= 3 {
        exhaustive_count_points(c, p)
    } else {
        count_points_with_table(c, &ResidueTable::new(p))
    }
}

/// Character-sum count sharing a prebuilt residue table; p > 3.
pub fn count_points_with_table(c: &WeierstrassCoefficients, table: &ResidueTable) -> u64 {
    let p = table.p;
    let (a, b) = short_form_mod_p(c, p);
    // #affine = sum_x (1 + chi(x^3 + Ax + B)); evaluate the cubic by
    // running finite differences, additions and conditional subtracts only.
    let mut f = b; // f(0)
    let mut d1 = (1 + a) % p; // f(x+1) - f(x) at x = 0
    let mut d2 = 6 % p; // second difference at x = 0
    let d3 = 6 % p;
    let mut sum: i64 = 0;
    for _ in 0..p {
        sum += table.chi(f);
        f += d1;
        if f >= p {
            f -= p;
        }
        d1 += d2;
        if d1 >= p {
            d1 -= p;
        }
        d2 += d3;
        if d2 >= p {
            d2 -= p;
        }
    }
    (p as i64 + 1 + sum) as u64
}

/// a_p = p + 1 - #E(F_p); trace of Frobenius at good primes, in {-1, 0, 1}
/// at bad primes of a minimal model.
pub fn ap(c: &WeierstrassCoefficients, p: u64) -> i64 {
    p as i64 + 1 - count_points(c, p) as i64
}

fn ap_with_tables(c: &WeierstrassCoefficients, table: &PrimeTable, residues: &[Option<ResidueTable>]) -> Vec<i16> {
    table
        .primes()
        .iter()
        .zip(residues)
        .map(|(&p, res)| {
            let a = match res {
                Some(t) => p as i64 + 1 - count_points_with_table(c, t) as i64,
                None => ap(c, p),
            };
            a as i16
        })
        .collect()
}

/// The vector (a_{p_1}, ..., a_{p_M}) of a curve over the given prime table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApVector {
    pub values: Vec<i16>,
    pub curve_id: Option<String>,
}

pub fn ap_vector(c: &WeierstrassCoefficients, table: &PrimeTable) -> ApVector {
    let residues = build_residue_tables(table);
    ApVector { values: ap_with_tables(c, table, &residues), curve_id: None }
}

fn build_residue_tables(table: &PrimeTable) -> Vec<Option<ResidueTable>> {
    table
        .primes()
        .par_iter()
        .map(|&p| if p > 3 { Some(ResidueTable::new(p)) } else { None })
        .collect()
}

/// a_p rows for a batch of curves; row i corresponds to curves[i].
/// Residue tables are built once and shared read-only; the result is
/// bit-identical for any worker count.
pub fn batch_ap_matrix(
    curves: &[WeierstrassCoefficients],
    table: &PrimeTable,
    workers: usize,
) -> Vec<Vec<i16>> {
    assert!(workers >= 1, "need at least one worker");
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("building worker pool");
    pool.install(|| {
        let residues = build_residue_tables(table);
        curves
            .par_iter()
            .map(|c| ap_with_tables(c, table, &residues))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve_11a1() -> WeierstrassCoefficients {
        WeierstrassCoefficients::new(0, -1, 1, -10, -20)
    }

    #[test]
    fn nth_prime_anchors() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(2), 3);
        assert_eq!(nth_prime(1000), 7919);
    }

    #[test]
    fn prime_table_invariants() {
        let t = PrimeTable::new(1000);
        assert_eq!(t.get(0), 2);
        assert_eq!(t.get(999), 7919);
        assert!(t.primes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn count_points_small_curves() {
        // y^2 = x^3 + 1 over F_3: exhaustive double loop gives 4.
        let c = WeierstrassCoefficients::new(0, 0, 0, 0, 1);
        assert_eq!(count_points(&c, 3), 4);
        // y^2 = x^3 + x over F_3.
        let c = WeierstrassCoefficients::new(0, 0, 0, 1, 0);
        assert_eq!(count_points(&c, 3), 4);
        assert_eq!(ap(&c, 3), 0);
    }

    #[test]
    fn count_at_two_within_bound() {
        let c = curve_11a1();
        assert!(count_points(&c, 2) <= 5);
    }

    #[test]
    fn ap_11a1_known_values() {
        let c = curve_11a1();
        assert_eq!(ap(&c, 2), -2);
        // Bad prime: 11a1 has split multiplicative reduction at 11.
        assert_eq!(ap(&c, 11), 1);
    }

    #[test]
    fn ap_vector_11a1_first_five() {
        let t = PrimeTable::new(5);
        let v = ap_vector(&curve_11a1(), &t);
        assert_eq!(v.values, vec![-2, -1, 1, -2, 1]);
    }

    #[test]
    fn char_sum_matches_exhaustive_oracle() {
        let curves = [
            curve_11a1(),
            WeierstrassCoefficients::new(0, 0, 1, -1, 0),  // 37a1
            WeierstrassCoefficients::new(0, 1, 1, -2, 0),  // 389a1
            WeierstrassCoefficients::new(1, 1, 1, -10, -10), // 15a1
            WeierstrassCoefficients::new(0, 0, 0, -7, 6),
        ];
        let t = PrimeTable::new(25); // primes through 97
        for c in &curves {
            for &p in t.primes() {
                assert_eq!(
                    count_points(c, p),
                    exhaustive_count_points(c, p),
                    "curve {:?} at p={}",
                    c,
                    p
                );
            }
        }
    }

    #[test]
    fn hasse_bound_at_good_primes() {
        let c = curve_11a1();
        let t = PrimeTable::new(200);
        for &p in t.primes() {
            if p == 11 {
                continue;
            }
            let a = ap(&c, p);
            assert!((a * a) as u64 <= 4 * p, "Hasse bound violated at p={p}");
        }
    }

    #[test]
    fn batch_matches_single_and_is_deterministic() {
        let curves: Vec<_> = (0..20)
            .map(|i| WeierstrassCoefficients::new(i % 2, -(i % 3), 1, -10 - i, i * i - 20))
            .collect();
        let t = PrimeTable::new(30);
        let one = batch_ap_matrix(&curves, &t, 1);
        let eight = batch_ap_matrix(&curves, &t, 8);
        assert_eq!(one, eight);
        for (row, c) in one.iter().zip(&curves) {
            assert_eq!(*row, ap_vector(c, &t).values);
        }
    }
}
