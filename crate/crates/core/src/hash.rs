//! Limited-independence polynomial hashing over a prime field, and the
//! ε-min-wise wrapper used to order vertices.

use rand::Rng;
use thiserror::Error;

use crate::seed;
use crate::stream::VertexId;

/// Default multiplier `c_h` in `k = c_h * ceil(log2(1/ε))`.
pub const DEFAULT_INDEPENDENCE_CONSTANT: u32 = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HashError {
    #[error("epsilon {epsilon} outside [1/n^2, 1) for n = {n}")]
    EpsilonOutOfRange { epsilon: f64, n: u64 },
    #[error("input {x} outside domain [1, {domain}]")]
    DomainViolation { x: u64, domain: u64 },
    #[error("invalid hash parameters: {0}")]
    InvalidParams(String),
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= m`.
pub fn next_prime(m: u64) -> u64 {
    let mut p = m.max(2);
    while !is_prime(p) {
        p += 1;
    }
    p
}

/// A random polynomial of degree `k - 1` over `GF(p)`: a k-wise independent
/// family from `[1, domain]` into `[0, codomain)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KWiseHash {
    k: usize,
    prime: u64,
    coeffs: Vec<u64>,
    domain: u64,
    codomain: u64,
    seed: u64,
}

impl KWiseHash {
    pub fn new(k: usize, domain: u64, codomain: u64, seed: u64) -> Result<Self, HashError> {
        if k == 0 || domain == 0 || codomain == 0 {
            return Err(HashError::InvalidParams(format!(
                "k={k} domain={domain} codomain={codomain}"
            )));
        }
        let prime = next_prime(codomain.max(domain.saturating_add(1)));
        let mut rng = seed::rng(seed);
        let coeffs = (0..k).map(|_| rng.gen_range(0..prime)).collect();
        Ok(Self {
            k,
            prime,
            coeffs,
            domain,
            codomain,
            seed,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn domain(&self) -> u64 {
        self.domain
    }

    pub fn codomain(&self) -> u64 {
        self.codomain
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn eval(&self, x: u64) -> Result<u64, HashError> {
        if x == 0 || x > self.domain {
            return Err(HashError::DomainViolation {
                x,
                domain: self.domain,
            });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Polynomial value reduced into `[0, codomain)`; `x` must be in the domain.
    #[inline]
    pub fn eval_unchecked(&self, x: u64) -> u64 {
        let p = self.prime as u128;
        let x = x as u128 % p;
        let mut acc: u128 = 0;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * x + c as u128) % p;
        }
        (acc as u64) % self.codomain
    }

    pub fn space_bytes(&self) -> usize {
        self.coeffs.len() * 8 + 40
    }
}

/// Anything that totally orders vertices. Ties in priority are broken by id.
pub trait VertexPriority {
    fn priority(&self, v: VertexId) -> u64;

    #[inline]
    fn precedes(&self, a: VertexId, b: VertexId) -> bool {
        (self.priority(a), a) < (self.priority(b), b)
    }
}

/// ε-min-wise hash `[n] -> [n^3]` built from a k-wise independent polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct MinWiseHash {
    inner: KWiseHash,
    epsilon: f64,
    n: u64,
}

/// Independence required for ε-min-wise behaviour: `c_h * ceil(log2(1/ε))`, at least 2.
pub fn min_wise_independence(epsilon: f64, c_h: u32) -> usize {
    let bits = (1.0 / epsilon).log2().ceil().max(1.0) as usize;
    (c_h as usize * bits).max(2)
}

impl MinWiseHash {
    pub fn new(epsilon: f64, n: u64, seed: u64) -> Result<Self, HashError> {
        Self::with_independence_constant(epsilon, n, seed, DEFAULT_INDEPENDENCE_CONSTANT)
    }

    pub fn with_independence_constant(
        epsilon: f64,
        n: u64,
        seed: u64,
        c_h: u32,
    ) -> Result<Self, HashError> {
        if n == 0 || n > (1 << 21) {
            return Err(HashError::InvalidParams(format!(
                "n={n} must lie in [1, 2^21] so that n^3 fits the field"
            )));
        }
        let nf = n as f64;
        if !(epsilon < 1.0 && epsilon >= 1.0 / (nf * nf)) {
            return Err(HashError::EpsilonOutOfRange { epsilon, n });
        }
        let k = min_wise_independence(epsilon, c_h);
        let inner = KWiseHash::new(k, n, n * n * n, seed)?;
        Ok(Self { inner, epsilon, n })
    }

    /// Hash value in `[1, n^3]`.
    pub fn eval(&self, x: u64) -> Result<u64, HashError> {
        self.inner.eval(x).map(|h| h + 1)
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.inner.k()
    }

    pub fn prime(&self) -> u64 {
        self.inner.prime()
    }

    pub fn space_bytes(&self) -> usize {
        self.inner.space_bytes() + 16
    }
}

impl VertexPriority for MinWiseHash {
    #[inline]
    fn priority(&self, v: VertexId) -> u64 {
        self.inner.eval_unchecked(v as u64) + 1
    }
}

/// An explicit vertex order, for replacing the hash with a fixed permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitPermutation {
    rank: Vec<u64>,
}

impl ExplicitPermutation {
    /// `order[0]` comes first. Must be a permutation of `1..=order.len()`.
    pub fn from_order(order: &[VertexId]) -> Result<Self, HashError> {
        let n = order.len();
        let mut rank = vec![u64::MAX; n + 1];
        for (pos, &v) in order.iter().enumerate() {
            let vi = v as usize;
            if vi == 0 || vi > n || rank[vi] != u64::MAX {
                return Err(HashError::InvalidParams(format!(
                    "order is not a permutation of 1..={n}"
                )));
            }
            rank[vi] = pos as u64;
        }
        Ok(Self { rank })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rank: std::iter::once(u64::MAX).chain(0..n as u64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.rank.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl VertexPriority for ExplicitPermutation {
    #[inline]
    fn priority(&self, v: VertexId) -> u64 {
        self.rank[v as usize]
    }
}

/// True iff `x` strictly precedes every element of `others` (which must not contain `x`).
pub fn is_min_of<P: VertexPriority + ?Sized>(h: &P, x: VertexId, others: &[VertexId]) -> bool {
    others.iter().all(|&y| h.precedes(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_match_sieve() {
        let limit = 5000u64;
        let mut sieve = vec![true; limit as usize];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..limit as usize {
            if sieve[i] {
                let mut j = i * i;
                while j < limit as usize {
                    sieve[j] = false;
                    j += i;
                }
            }
        }
        for i in 0..limit {
            assert_eq!(is_prime(i), sieve[i as usize], "{i}");
        }
    }

    #[test]
    fn large_known_primes() {
        assert!(is_prime((1 << 61) - 1));
        assert!(!is_prime(((1u64 << 61) - 1) * 3));
        assert_eq!(next_prime(1_000_000), 1_000_003);
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2, 3, 5, 7
    }

    #[test]
    fn min_wise_range_and_prime() {
        let h = MinWiseHash::new(0.25, 100, 9).unwrap();
        assert_eq!(h.prime(), 1_000_003);
        assert_eq!(h.k(), 8);
        for x in 1..=100 {
            let v = h.eval(x).unwrap();
            assert!((1..=1_000_000).contains(&v));
        }
        assert!(matches!(
            h.eval(101),
            Err(HashError::DomainViolation { .. })
        ));
        assert!(matches!(h.eval(0), Err(HashError::DomainViolation { .. })));
    }

    #[test]
    fn epsilon_range_enforced() {
        assert!(matches!(
            MinWiseHash::new(1.0, 10, 0),
            Err(HashError::EpsilonOutOfRange { .. })
        ));
        assert!(matches!(
            MinWiseHash::new(0.001, 10, 0),
            Err(HashError::EpsilonOutOfRange { .. })
        ));
        assert!(MinWiseHash::new(0.01, 10, 0).is_ok());
    }

    #[test]
    fn seed_determinism() {
        let a = KWiseHash::new(5, 1000, 77, 3).unwrap();
        let b = KWiseHash::new(5, 1000, 77, 3).unwrap();
        let c = KWiseHash::new(5, 1000, 77, 4).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn pairwise_collision_rate() {
        // Over random seeds, a fixed pair collides with probability close to 1/m.
        let m = 16u64;
        let trials = 20_000;
        let mut hits = 0;
        for s in 0..trials {
            let h = KWiseHash::new(2, 1000, m, s).unwrap();
            if h.eval(3).unwrap() == h.eval(500).unwrap() {
                hits += 1;
            }
        }
        let rate = hits as f64 / trials as f64;
        assert!((rate - 1.0 / m as f64).abs() < 0.015, "{rate}");
    }

    #[test]
    fn min_wise_first_place_frequency() {
        // Each of 10 elements should be the minimum about 1/10 of the time.
        let n = 10u64;
        let trials = 20_000;
        let mut wins = vec![0usize; n as usize + 1];
        for s in 0..trials {
            let h = MinWiseHash::new(0.1, n, s).unwrap();
            let best = (1..=n as u32).min_by_key(|&v| (h.priority(v), v)).unwrap();
            wins[best as usize] += 1;
        }
        for &w in &wins[1..] {
            let f = w as f64 / trials as f64;
            assert!((f - 0.1).abs() < 0.02, "{f}");
        }
    }

    #[test]
    fn explicit_permutation_orders() {
        let p = ExplicitPermutation::from_order(&[3, 1, 2]).unwrap();
        assert!(p.precedes(3, 1));
        assert!(p.precedes(1, 2));
        assert!(is_min_of(&p, 3, &[1, 2]));
        assert!(!is_min_of(&p, 1, &[3]));
        assert!(ExplicitPermutation::from_order(&[1, 1, 2]).is_err());
    }
}
