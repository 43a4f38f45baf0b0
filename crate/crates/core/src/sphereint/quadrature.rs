//! Node sets on the unit sphere `S^{n-1}`.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::gamma::sphere_area;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // P_n(x) and P_n'(x) by the three-term recurrence.
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n <= 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Points on `S^{n-1}` (row-major, `dim` coordinates each) with surface
/// measure weights.
#[derive(Debug, Clone)]
pub struct NodeSet {
    pub dim: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }
}

/// The two points of `S^0` with counting measure.
pub fn zero_sphere() -> NodeSet {
    NodeSet {
        dim: 1,
        points: vec![1.0, -1.0],
        weights: vec![1.0, 1.0],
    }
}

/// Product rule: trapezoid in the azimuth (`2 * order` points) times
/// Gauss–Legendre in each polar angle with its `sin^k` Jacobian. Exact for
/// polynomials of degree below `order` (the azimuthal rule integrates
/// trigonometric polynomials of degree `< 2 * order`).
pub fn product_rule(dim: usize, order: usize) -> NodeSet {
    assert!(dim >= 2, "product rule needs dimension >= 2");
    let m = 2 * order;
    let mut set = NodeSet {
        dim: 2,
        points: Vec::with_capacity(2 * m),
        weights: vec![2.0 * std::f64::consts::PI / m as f64; m],
    };
    for k in 0..m {
        let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
        set.points.push(t.cos());
        set.points.push(t.sin());
    }
    let (gx, gw) = gauss_legendre(order);
    for d in 3..=dim {
        let mut next = NodeSet {
            dim: d,
            points: Vec::with_capacity(set.len() * order * d),
            weights: Vec::with_capacity(set.len() * order),
        };
        for (x, w) in gx.iter().zip(&gw) {
            let theta = std::f64::consts::FRAC_PI_2 * (x + 1.0);
            let (s, c) = theta.sin_cos();
            let jac = std::f64::consts::FRAC_PI_2 * w * s.powi(d as i32 - 2);
            for i in 0..set.len() {
                next.points.extend(set.point(i).iter().map(|y| y * s));
                next.points.push(c);
                next.weights.push(set.weights[i] * jac);
            }
        }
        set = next;
    }
    set
}

/// Gauss–Legendre on each arc of the unit circle between consecutive
/// `breaks` (angles in `[0, 2π)`), so integrands that are smooth away from
/// the break angles converge quickly.
pub fn circle_arcs(breaks: &[f64], order: usize) -> NodeSet {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut cuts: Vec<f64> = breaks.iter().map(|b| b.rem_euclid(two_pi)).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    if cuts.is_empty() {
        cuts.push(0.0);
    }
    let (gx, gw) = gauss_legendre(order);
    let mut set = NodeSet {
        dim: 2,
        points: Vec::new(),
        weights: Vec::new(),
    };
    for i in 0..cuts.len() {
        let a = cuts[i];
        let b = if i + 1 < cuts.len() { cuts[i + 1] } else { cuts[0] + two_pi };
        let half = (b - a) / 2.0;
        for (x, w) in gx.iter().zip(&gw) {
            let t = a + half * (x + 1.0);
            set.points.push(t.cos());
            set.points.push(t.sin());
            set.weights.push(half * w);
        }
    }
    set
}

/// Stratified random points: consecutive pairs `(2k, 2k+1)` share a
/// stratum, and every stratum has measure `pair_measure`.
#[derive(Debug, Clone)]
pub struct StratifiedSamples {
    pub dim: usize,
    pub points: Vec<f64>,
    pub pair_measure: f64,
}

impl StratifiedSamples {
    pub fn pairs(&self) -> usize {
        self.points.len() / (2 * self.dim)
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.dim..(i + 1) * self.dim]
    }

    /// At least `samples` points (rounded up to whole strata).
    ///
    /// * `n = 2`: equal arcs of the circle.
    /// * `n = 3`: an equal-area grid in `(z, φ)` (Archimedes' projection).
    /// * `n >= 4`: normalized Gaussian vectors; each "stratum" is the whole
    ///   sphere, which reduces to plain Monte Carlo.
    pub fn generate(dim: usize, samples: usize, seed: u64) -> Self {
        assert!(dim >= 2, "stratified sampling needs dimension >= 2");
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = samples.div_ceil(2).max(1);
        let two_pi = 2.0 * std::f64::consts::PI;
        match dim {
            2 => {
                let width = two_pi / pairs as f64;
                let mut points = Vec::with_capacity(4 * pairs);
                for k in 0..pairs {
                    for _ in 0..2 {
                        let t = (k as f64 + rng.random::<f64>()) * width;
                        points.push(t.cos());
                        points.push(t.sin());
                    }
                }
                StratifiedSamples {
                    dim,
                    points,
                    pair_measure: width,
                }
            }
            3 => {
                let kz = ((pairs as f64 / 2.0).sqrt().floor() as usize).max(1);
                let kphi = pairs.div_ceil(kz);
                let total = kz * kphi;
                let mut points = Vec::with_capacity(6 * total);
                for iz in 0..kz {
                    for ip in 0..kphi {
                        for _ in 0..2 {
                            let z = -1.0 + 2.0 * (iz as f64 + rng.random::<f64>()) / kz as f64;
                            let phi = two_pi * (ip as f64 + rng.random::<f64>()) / kphi as f64;
                            let rho = (1.0 - z * z).max(0.0).sqrt();
                            points.push(rho * phi.cos());
                            points.push(rho * phi.sin());
                            points.push(z);
                        }
                    }
                }
                StratifiedSamples {
                    dim,
                    points,
                    pair_measure: 4.0 * std::f64::consts::PI / total as f64,
                }
            }
            _ => {
                let mut points = Vec::with_capacity(2 * pairs * dim);
                let mut g = vec![0.0; dim];
                for _ in 0..2 * pairs {
                    loop {
                        for v in g.iter_mut() {
                            *v = rng.sample(StandardNormal);
                        }
                        let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
                        if norm > 1e-12 {
                            points.extend(g.iter().map(|v| v / norm));
                            break;
                        }
                    }
                }
                StratifiedSamples {
                    dim,
                    points,
                    pair_measure: sphere_area(dim) / pairs as f64,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1usize, 2, 5, 12, 40] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}");
            // ∫ x^{2n-2} = 2/(2n-1)
            let k = 2 * n as i32 - 2;
            let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            assert!((s - 2.0 / (k as f64 + 1.0)).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn product_rule_area() {
        for dim in 2..=5 {
            let r = product_rule(dim, 16);
            let total: f64 = r.weights.iter().sum();
            assert!((total - sphere_area(dim)).abs() < 1e-10, "dim={dim}");
            for i in 0..r.len() {
                let n2: f64 = r.point(i).iter().map(|v| v * v).sum();
                assert!((n2 - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn circle_arcs_cover_circle() {
        let r = circle_arcs(&[0.3, 2.0, 4.0], 12);
        let total: f64 = r.weights.iter().sum();
        assert!((total - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn stratified_is_reproducible() {
        let a = StratifiedSamples::generate(3, 1000, 9);
        let b = StratifiedSamples::generate(3, 1000, 9);
        assert_eq!(a.points, b.points);
        assert!((a.pair_measure * a.pairs() as f64 - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        let c = StratifiedSamples::generate(4, 100, 9);
        assert_eq!(c.pairs(), 50);
    }
}
