//! Sandwich bounds relating β, γ, φ of a forest to its leaf, non-leaf,
//! support and component counts, and the point/interval formulas built on
//! them. [`Bound::holds`] uses integer arithmetic only.

/// Exact counts of a forest without isolated vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ForestSummary {
    pub n: u64,
    pub components: u64,
    pub deg1: u64,
    pub deg_ge2: u64,
    pub supp: u64,
}

impl ForestSummary {
    pub fn from_truth(t: &crate::stream::GroundTruth) -> Self {
        Self {
            n: t.n as u64,
            components: t.components,
            deg1: t.deg1,
            deg_ge2: t.deg_ge2,
            supp: t.supp,
        }
    }
}

/// A named inequality between a parameter and the counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bound {
    /// `max{n/2, |Deg1| - c} ≤ β ≤ (n + |Deg1|)/2`
    BetaLeaves,
    /// `(n + |Deg1| - |Supp|)/2 ≤ β ≤ 2(n + |Deg1| - |Supp|)/3`
    BetaSupport,
    /// If `|Supp| ≤ |Deg≥2|/2`: `3(n + |Deg1|)/8 ≤ β ≤ (n + |Deg1|)/2`
    BetaFewSupports,
    /// `|Deg≥2|/3 ≤ γ ≤ |Deg≥2| + c`
    GammaNonLeaves,
    /// `(|Deg≥2| + |Supp|)/4 ≤ γ ≤ (|Deg≥2| + |Supp|)/2`
    GammaSupport,
    /// If `|Supp| ≤ |Deg≥2|/3`: `|Deg≥2|/3 ≤ γ ≤ 2|Deg≥2|/3`
    GammaFewSupports,
    /// `max{c, (|Deg≥2| + c)/2} ≤ φ ≤ |Deg≥2| + c`
    PhiNonLeaves,
    /// `(|Deg≥2| + |Supp|)/3 ≤ φ ≤ (|Deg≥2| + |Supp|)/2`
    PhiSupport,
    /// If `|Supp| ≤ |Deg≥2|/2`: `max{c, (|Deg≥2| + c)/2} ≤ φ ≤ 3(|Deg≥2| + c)/4`
    PhiFewSupports,
    /// `n - 2φ ≤ β ≤ n - φ`
    IndependenceMatching,
}

impl Bound {
    pub const ALL: [Bound; 10] = [
        Bound::BetaLeaves,
        Bound::BetaSupport,
        Bound::BetaFewSupports,
        Bound::GammaNonLeaves,
        Bound::GammaSupport,
        Bound::GammaFewSupports,
        Bound::PhiNonLeaves,
        Bound::PhiSupport,
        Bound::PhiFewSupports,
        Bound::IndependenceMatching,
    ];

    /// Whether the hypothesis of a conditional bound is met.
    pub fn applies(self, s: &ForestSummary) -> bool {
        match self {
            Bound::BetaFewSupports | Bound::PhiFewSupports => 2 * s.supp <= s.deg_ge2,
            Bound::GammaFewSupports => 3 * s.supp <= s.deg_ge2,
            _ => true,
        }
    }

    /// Checks the inequality for exact optima. Vacuously true when
    /// [`Bound::applies`] is false.
    pub fn holds(self, s: &ForestSummary, beta: u64, gamma: u64, phi: u64) -> bool {
        if !self.applies(s) {
            return true;
        }
        let (n, c, d1, h, sp) = (s.n, s.components, s.deg1, s.deg_ge2, s.supp);
        match self {
            Bound::BetaLeaves => 2 * beta >= n && beta + c >= d1 && 2 * beta <= n + d1,
            Bound::BetaSupport => {
                let x = n + d1 - sp;
                2 * beta >= x && 3 * beta <= 2 * x
            }
            Bound::BetaFewSupports => 8 * beta >= 3 * (n + d1) && 2 * beta <= n + d1,
            Bound::GammaNonLeaves => 3 * gamma >= h && gamma <= h + c,
            Bound::GammaSupport => 4 * gamma >= h + sp && 2 * gamma <= h + sp,
            Bound::GammaFewSupports => 3 * gamma >= h && 3 * gamma <= 2 * h,
            Bound::PhiNonLeaves => phi >= c && 2 * phi >= h + c && phi <= h + c,
            Bound::PhiSupport => 3 * phi >= h + sp && 2 * phi <= h + sp,
            Bound::PhiFewSupports => phi >= c && 2 * phi >= h + c && 4 * phi <= 3 * (h + c),
            Bound::IndependenceMatching => beta + phi <= n && beta + 2 * phi >= n,
        }
    }
}

/// Every unconditional and applicable conditional bound that fails.
pub fn violations(s: &ForestSummary, beta: u64, gamma: u64, phi: u64) -> Vec<Bound> {
    Bound::ALL
        .iter()
        .copied()
        .filter(|b| !b.holds(s, beta, gamma, phi))
        .collect()
}

/// `|Deg1| == 2c + Σ_{i≥3} (i-2)|Deg_i|` for the degree sequence of a forest
/// with `components` trees, none of them a single vertex.
pub fn leaf_identity_holds(degrees: &[u64], components: u64) -> bool {
    let leaves = degrees.iter().filter(|&&d| d == 1).count() as u64;
    let excess: u64 = degrees.iter().filter(|&&d| d >= 3).map(|&d| d - 2).sum();
    leaves == 2 * components + excess
}

/// Two-pass points scaled to integers: β uses `8 * point`, γ `6 * point`,
/// φ `4 * point`.
pub fn two_pass_points_scaled(s: &ForestSummary) -> (u64, u64, u64) {
    let (n, c, d1, h, sp) = (s.n, s.components, s.deg1, s.deg_ge2, s.supp);
    let beta8 = (3 * (n + d1)).min(4 * (n + d1 - sp));
    let gamma6 = (4 * h).max(3 * (h + sp));
    let phi4 = (3 * (h + c)).max(2 * (h + sp));
    (beta8, gamma6, phi4)
}

/// With exact counts: `point ≤ β ≤ 4/3·point`, `point/2 ≤ γ ≤ point` and
/// `2/3·point ≤ φ ≤ point`.
pub fn two_pass_factors_hold(s: &ForestSummary, beta: u64, gamma: u64, phi: u64) -> [bool; 3] {
    let (b8, g6, p4) = two_pass_points_scaled(s);
    [
        b8 <= 8 * beta && 3 * 8 * beta <= 4 * b8,
        g6 <= 2 * 6 * gamma && 6 * gamma <= g6,
        2 * p4 <= 3 * 4 * phi && 4 * phi <= p4,
    ]
}

/// `(lower, point, upper)` of the one-pass β interval.
pub fn beta_one_pass(n: f64, deg1: f64, c: f64) -> (f64, f64, f64) {
    let d1 = deg1.clamp(0.0, n);
    let lower = (n / 2.0).max(d1 - c);
    let upper = (n + d1) / 2.0;
    (lower, lower, upper.max(lower))
}

pub fn gamma_one_pass(n: f64, deg_ge2: f64, c: f64) -> (f64, f64, f64) {
    let h = deg_ge2.clamp(0.0, n);
    let lower = (h / 3.0).max(c);
    let upper = (h + c).max(lower);
    (lower, ((h + c) / 3.0).clamp(lower, upper), upper)
}

pub fn phi_one_pass(n: f64, deg_ge2: f64, c: f64) -> (f64, f64, f64) {
    let h = deg_ge2.clamp(0.0, n);
    let lower = c.max((h + c) / 2.0);
    let upper = (h + c).max(lower);
    (lower, ((h + c) / 2.0).clamp(lower, upper), upper)
}

/// `min{3(n + |Deg1|)/8, (n + |Deg1| - |Supp|)/2}`
pub fn beta_two_pass_point(n: f64, deg1: f64, supp: f64) -> f64 {
    (3.0 * (n + deg1) / 8.0).min((n + deg1 - supp) / 2.0).max(0.0)
}

/// `max{2|Deg≥2|/3, (|Deg≥2| + |Supp|)/2}`
pub fn gamma_two_pass_point(deg_ge2: f64, supp: f64) -> f64 {
    (2.0 * deg_ge2 / 3.0).max((deg_ge2 + supp) / 2.0)
}

/// `max{3(|Deg≥2| + c)/4, (|Deg≥2| + |Supp|)/2}`
pub fn phi_two_pass_point(deg_ge2: f64, supp: f64, c: f64) -> f64 {
    (3.0 * (deg_ge2 + c) / 4.0).max((deg_ge2 + supp) / 2.0)
}
