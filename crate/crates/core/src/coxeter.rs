//! Root systems, finite reflection groups and multiplicity functions.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{dot, Reflection};
use crate::scalar::Scalar;

/// Default bound on the number of roots or group elements produced by a
/// closure computation.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

const FLOAT_ZERO: f64 = 1e-12;

/// Named root-system families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// `Z2^n`: roots `±e_i`, one multiplicity per coordinate.
    Z2(usize),
    /// `A_{rank}` realized in `R^{rank+1}`: roots `e_i - e_j`.
    A(usize),
    /// `B_n`: short roots `±e_i`, long roots `±e_i ± e_j`.
    B(usize),
    /// `D_n`: roots `±e_i ± e_j`.
    D(usize),
    /// Dihedral `I2(m)` in the plane: `2m` roots at angles `πk/m`.
    Dihedral(u32),
}

impl Family {
    /// Ambient dimension.
    pub fn dim(&self) -> usize {
        match *self {
            Family::Z2(n) | Family::B(n) | Family::D(n) => n,
            Family::A(rank) => rank + 1,
            Family::Dihedral(_) => 2,
        }
    }

    /// Parses CLI-style names: `Z2`, `A`, `B`, `D`, `I2`. `param` is the
    /// dimension for Z2/B/D, the rank for A and `m` for I2.
    pub fn from_name(name: &str, param: usize) -> Result<Self> {
        match name.to_ascii_uppercase().as_str() {
            "Z2" | "Z2N" => Ok(Family::Z2(param)),
            "A" => Ok(Family::A(param)),
            "B" => Ok(Family::B(param)),
            "D" => Ok(Family::D(param)),
            "I2" | "DIHEDRAL" => Ok(Family::Dihedral(param as u32)),
            other => Err(Error::Input(format!("unknown root-system family {other:?}"))),
        }
    }

    /// The full root system with lexicographic positive roots.
    pub fn root_system<S: Scalar>(&self) -> Result<RootSystem<S>> {
        RootSystem::new(self.dim(), self.roots()?)
    }

    /// Whether the family has rational root coordinates.
    pub fn is_rational(&self) -> bool {
        match *self {
            Family::Dihedral(m) => matches!(m, 1 | 2 | 4),
            _ => true,
        }
    }

    pub(crate) fn roots<S: Scalar>(&self) -> Result<Vec<Vec<S>>> {
        let unit = |n: usize, i: usize, s: i64| {
            let mut v = vec![S::zero(); n];
            v[i] = S::from_int(s);
            v
        };
        let pair = |n: usize, i: usize, j: usize, si: i64, sj: i64| {
            let mut v = vec![S::zero(); n];
            v[i] = S::from_int(si);
            v[j] = S::from_int(sj);
            v
        };
        match *self {
            Family::Z2(n) => {
                if n == 0 {
                    return Err(Error::InvalidRank("Z2 needs dimension >= 1".into()));
                }
                Ok((0..n)
                    .flat_map(|i| [unit(n, i, 1), unit(n, i, -1)])
                    .collect())
            }
            Family::A(rank) => {
                if rank == 0 {
                    return Err(Error::InvalidRank("A needs rank >= 1".into()));
                }
                let n = rank + 1;
                let mut out = Vec::new();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            out.push(pair(n, i, j, 1, -1));
                        }
                    }
                }
                Ok(out)
            }
            Family::B(n) => {
                if n == 0 {
                    return Err(Error::InvalidRank("B needs dimension >= 1".into()));
                }
                let mut out: Vec<Vec<S>> = (0..n)
                    .flat_map(|i| [unit(n, i, 1), unit(n, i, -1)])
                    .collect();
                out.extend(long_roots(n, &pair));
                Ok(out)
            }
            Family::D(n) => {
                if n < 2 {
                    return Err(Error::InvalidRank("D needs dimension >= 2".into()));
                }
                Ok(long_roots(n, &pair))
            }
            Family::Dihedral(m) => dihedral_roots(m),
        }
    }
}

fn long_roots<S: Scalar>(
    n: usize,
    pair: &dyn Fn(usize, usize, usize, i64, i64) -> Vec<S>,
) -> Vec<Vec<S>> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                out.push(pair(n, i, j, si, sj));
            }
        }
    }
    out
}

fn dihedral_roots<S: Scalar>(m: u32) -> Result<Vec<Vec<S>>> {
    if m == 0 {
        return Err(Error::InvalidRank("I2(m) needs m >= 1".into()));
    }
    let int = |a: i64, b: i64| vec![S::from_int(a), S::from_int(b)];
    if S::EXACT {
        // Integer directions along the angles πk/m.
        return match m {
            1 => Ok(vec![int(1, 0), int(-1, 0)]),
            2 => Ok(vec![int(1, 0), int(0, 1), int(-1, 0), int(0, -1)]),
            4 => Ok(vec![
                int(1, 0),
                int(1, 1),
                int(0, 1),
                int(-1, 1),
                int(-1, 0),
                int(-1, -1),
                int(0, -1),
                int(1, -1),
            ]),
            _ => Err(Error::ExactModeUnavailable(format!(
                "I2({m}) has irrational root coordinates; use float mode"
            ))),
        };
    }
    let snap = |x: f64| if x.abs() < 1e-14 { 0.0 } else { x };
    (0..2 * m)
        .map(|k| {
            let t = std::f64::consts::PI * k as f64 / m as f64;
            let c = S::try_from_float(snap(t.cos())).ok_or(Error::NonFinite)?;
            let s = S::try_from_float(snap(t.sin())).ok_or(Error::NonFinite)?;
            Ok(vec![c, s])
        })
        .collect()
}

fn is_zero_vec<S: Scalar>(v: &[S]) -> bool {
    v.iter().all(|c| c.is_negligible(FLOAT_ZERO))
}

fn vec_close<S: Scalar>(a: &[S], b: &[S]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.close_to(y))
}

fn negate<S: Scalar>(v: &[S]) -> Vec<S> {
    v.iter().map(|c| -c.clone()).collect()
}

fn lex_positive<S: Scalar>(v: &[S]) -> bool {
    v.iter()
        .find(|c| !c.is_negligible(FLOAT_ZERO))
        .is_some_and(|c| c.is_positive())
}

fn parallel<S: Scalar>(a: &[S], b: &[S]) -> bool {
    for i in 0..a.len() {
        for k in (i + 1)..a.len() {
            let cross = a[i].clone() * b[k].clone() - a[k].clone() * b[i].clone();
            if !cross.is_negligible(FLOAT_ZERO) {
                return false;
            }
        }
    }
    true
}

/// How the positive subsystem was selected.
#[derive(Debug, Clone, PartialEq)]
pub enum PositiveRule<S> {
    /// Roots whose first nonzero coordinate is positive.
    Lexicographic,
    /// Roots with `<v, w> > 0` for a fixed vector `w`.
    Functional(Vec<S>),
}

/// A finite set of roots together with a chosen positive half.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSystem<S> {
    dim: usize,
    roots: Vec<Vec<S>>,
    positive: Vec<usize>,
    rule: PositiveRule<S>,
}

impl<S: Scalar> RootSystem<S> {
    /// Wraps a root list without checking reflection closure; positive
    /// roots are chosen lexicographically.
    pub fn new(dim: usize, roots: Vec<Vec<S>>) -> Result<Self> {
        Self::check_roots(dim, &roots)?;
        let positive = (0..roots.len())
            .filter(|&i| lex_positive(&roots[i]))
            .collect();
        Ok(RootSystem {
            dim,
            roots,
            positive,
            rule: PositiveRule::Lexicographic,
        })
    }

    /// Positive roots are those on the positive side of `w`, which must not
    /// be orthogonal to any root.
    pub fn with_functional(dim: usize, roots: Vec<Vec<S>>, w: Vec<S>) -> Result<Self> {
        Self::check_roots(dim, &roots)?;
        if w.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: w.len(),
            });
        }
        let mut positive = Vec::new();
        for (i, v) in roots.iter().enumerate() {
            let s = dot(v, &w);
            if s.is_negligible(FLOAT_ZERO) {
                return Err(Error::Input(
                    "separating vector is orthogonal to a root".into(),
                ));
            }
            if s.is_positive() {
                positive.push(i);
            }
        }
        Ok(RootSystem {
            dim,
            roots,
            positive,
            rule: PositiveRule::Functional(w),
        })
    }

    fn check_roots(dim: usize, roots: &[Vec<S>]) -> Result<()> {
        for v in roots {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: v.len(),
                });
            }
            if is_zero_vec(v) {
                return Err(Error::ZeroRoot);
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn roots(&self) -> &[Vec<S>] {
        &self.roots
    }

    pub fn positive_indices(&self) -> &[usize] {
        &self.positive
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &[S]> {
        self.positive.iter().map(|&i| self.roots[i].as_slice())
    }

    pub fn rule(&self) -> &PositiveRule<S> {
        &self.rule
    }

    pub fn find(&self, v: &[S]) -> Option<usize> {
        self.roots.iter().position(|r| vec_close(r, v))
    }

    /// Partition of root indices into orbits of the reflection group, each
    /// orbit sorted and the list ordered by smallest member.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let n = self.roots.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root_of(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for u in &self.roots {
            let Ok(sigma) = Reflection::new(u) else { continue };
            for j in 0..n {
                if let Some(k) = self.find(&sigma.apply(&self.roots[j])) {
                    let (a, b) = (root_of(&mut parent, j), root_of(&mut parent, k));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = root_of(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = orbits.len();
                orbits.push(Vec::new());
            }
            orbits[slot[r]].push(i);
        }
        orbits
    }
}

/// Smallest reflection-closed root set containing `±seeds`.
pub fn closure_under_reflections<S: Scalar>(
    dim: usize,
    seeds: &[Vec<S>],
    cap: usize,
) -> Result<RootSystem<S>> {
    let mut roots: Vec<Vec<S>> = Vec::new();
    let push = |roots: &mut Vec<Vec<S>>, v: Vec<S>| -> Result<()> {
        if !roots.iter().any(|r| vec_close(r, &v)) {
            roots.push(v);
            if roots.len() > cap {
                return Err(Error::ClosureExplosion { cap });
            }
        }
        Ok(())
    };
    for s in seeds {
        if s.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.len(),
            });
        }
        if is_zero_vec(s) {
            return Err(Error::ZeroRoot);
        }
        push(&mut roots, s.clone())?;
        push(&mut roots, negate(s))?;
    }
    // Every pair (i, j) with max(i, j) >= done has not been reflected yet.
    let mut done = 0;
    while done < roots.len() {
        let end = roots.len();
        for i in 0..end {
            let sigma = Reflection::new(&roots[i])?;
            let start = if i < done { done } else { 0 };
            for j in start..end {
                let image = sigma.apply(&roots[j]);
                push(&mut roots, image)?;
            }
        }
        done = end;
    }
    RootSystem::new(dim, roots)
}

/// One line of a [`ValidationReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn passed(&self, name: &str) -> Option<bool> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "ok  " } else { "FAIL" };
            writeln!(f, "{tag} {}: {}", c.name, c.detail)?;
        }
        Ok(())
    }
}

/// A root system with a multiplicity function `κ` (one value per root) and
/// `γ = Σ_{v ∈ R+} κ_v`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedRootSystem<S> {
    system: RootSystem<S>,
    kappa: Vec<S>,
    gamma: S,
    unchecked_kappa: bool,
}

impl<S: Scalar> WeightedRootSystem<S> {
    /// Builds and fully validates.
    pub fn new(system: RootSystem<S>, kappa: Vec<S>, unchecked_kappa: bool) -> Result<Self> {
        let ws = Self::new_unvalidated(system, kappa, unchecked_kappa)?;
        if !unchecked_kappa {
            if let Some(k) = ws.kappa.iter().find(|k| k.is_negative()) {
                return Err(Error::NegativeKappa {
                    value: k.to_string(),
                });
            }
        }
        let report = ws.validate();
        if !report.all_passed() {
            return Err(Error::InvalidSystem(report.failures().join(", ")));
        }
        Ok(ws)
    }

    /// Only checks that `κ` has one entry per root. Use [`Self::validate`]
    /// to inspect the remaining invariants.
    pub fn new_unvalidated(
        system: RootSystem<S>,
        kappa: Vec<S>,
        unchecked_kappa: bool,
    ) -> Result<Self> {
        if kappa.len() != system.len() {
            return Err(Error::KappaCount {
                expected: system.len(),
                found: kappa.len(),
            });
        }
        if kappa.iter().any(|k| !k.is_finite()) {
            return Err(Error::NonFinite);
        }
        let gamma = sum_positive(&system, &kappa);
        Ok(WeightedRootSystem {
            system,
            kappa,
            gamma,
            unchecked_kappa,
        })
    }

    /// Named family with one multiplicity per orbit; orbits are ordered by
    /// their first root in the family's listing (for `B_n`: short roots
    /// first, for `Z2^n`: coordinate order).
    pub fn build_named(family: Family, kappa: &[S], unchecked_kappa: bool) -> Result<Self> {
        let system = RootSystem::new(family.dim(), family.roots()?)?;
        let orbits = system.orbits();
        if kappa.len() != orbits.len() {
            return Err(Error::KappaCount {
                expected: orbits.len(),
                found: kappa.len(),
            });
        }
        let mut per_root = vec![S::zero(); system.len()];
        for (orbit, k) in orbits.iter().zip(kappa) {
            for &i in orbit {
                per_root[i] = k.clone();
            }
        }
        Self::new(system, per_root, unchecked_kappa)
    }

    pub fn system(&self) -> &RootSystem<S> {
        &self.system
    }

    pub fn dim(&self) -> usize {
        self.system.dim
    }

    pub fn kappa(&self) -> &[S] {
        &self.kappa
    }

    pub fn gamma(&self) -> &S {
        &self.gamma
    }

    pub fn unchecked_kappa(&self) -> bool {
        self.unchecked_kappa
    }

    /// `(v, κ_v)` for every positive root.
    pub fn positive_with_kappa(&self) -> impl Iterator<Item = (&[S], &S)> {
        self.system
            .positive
            .iter()
            .map(|&i| (self.system.roots[i].as_slice(), &self.kappa[i]))
    }

    /// Same multiplicities with every positive root `v` replaced by
    /// `factors[k] * v` (negative roots follow). The result is generally not
    /// reflection-closed and is returned unvalidated.
    pub fn rescaled(&self, factors: &[S]) -> Result<Self> {
        if factors.len() != self.system.positive.len() {
            return Err(Error::Input("one factor per positive root".into()));
        }
        let mut roots = self.system.roots.clone();
        for (&i, f) in self.system.positive.iter().zip(factors) {
            let scaled: Vec<S> = roots[i].iter().map(|c| c.clone() * f.clone()).collect();
            if let Some(j) = self.system.find(&negate(&roots[i])) {
                roots[j] = negate(&scaled);
            }
            roots[i] = scaled;
        }
        let system = RootSystem {
            dim: self.system.dim,
            roots,
            positive: self.system.positive.clone(),
            rule: self.system.rule.clone(),
        };
        Self::new_unvalidated(system, self.kappa.clone(), self.unchecked_kappa)
    }

    /// Same roots with `κ ≡ 0`.
    pub fn with_zero_kappa(&self) -> Self {
        Self::new_unvalidated(
            self.system.clone(),
            vec![S::zero(); self.kappa.len()],
            false,
        )
        .expect("same arity")
    }

    /// Same roots and multiplicities, positive half re-selected with `w`.
    pub fn with_positive_functional(&self, w: Vec<S>) -> Result<Self> {
        let system = RootSystem::with_functional(self.system.dim, self.system.roots.clone(), w)?;
        Self::new_unvalidated(system, self.kappa.clone(), self.unchecked_kappa)
    }

    /// If this is `Z2^n` with roots exactly `±e_i`, the multiplicity of each
    /// coordinate.
    pub fn coordinate_kappas(&self) -> Option<Vec<S>> {
        let n = self.dim();
        if self.system.len() != 2 * n || self.system.positive.len() != n {
            return None;
        }
        let mut out = vec![None; n];
        for (v, k) in self.positive_with_kappa() {
            let nz: Vec<usize> = (0..n).filter(|&i| !v[i].is_zero()).collect();
            if nz.len() != 1 || !v[nz[0]].abs().is_one() {
                return None;
            }
            out[nz[0]] = Some(k.clone());
        }
        out.into_iter().collect()
    }

    /// Checks every root-system and multiplicity invariant.
    pub fn validate(&self) -> ValidationReport {
        let sys = &self.system;
        let mut checks = Vec::new();
        let mut add = |name: &str, passed: bool, detail: String| {
            checks.push(Check {
                name: name.to_string(),
                passed,
                detail,
            })
        };

        let nonzero = sys.roots.iter().all(|v| !is_zero_vec(v));
        add("nonzero_roots", nonzero, format!("{} roots", sys.len()));

        let reflections: Vec<Option<Reflection<S>>> =
            sys.roots.iter().map(|v| Reflection::new(v).ok()).collect();

        let mut missing = None;
        'outer: for (u, sigma) in sys.roots.iter().zip(&reflections) {
            let Some(sigma) = sigma else { continue };
            for v in &sys.roots {
                if sys.find(&sigma.apply(v)).is_none() {
                    missing = Some(format!("σ_{:?} maps {:?} outside R", fmt_vec(u), fmt_vec(v)));
                    break 'outer;
                }
            }
        }
        add(
            "reflection_closure",
            missing.is_none(),
            missing.unwrap_or_else(|| "σ_v R = R for every root".into()),
        );

        let mut bad = None;
        for (i, u) in sys.roots.iter().enumerate() {
            if sys.find(&negate(u)).is_none() {
                bad = Some(format!("-{} is not a root", fmt_vec(u)));
                break;
            }
            if let Some(v) = sys.roots[i + 1..].iter().find(|v| {
                parallel(u, v) && !vec_close(v, &negate(u)) && !vec_close(v, u)
            }) {
                bad = Some(format!("{} and {} are parallel", fmt_vec(u), fmt_vec(v)));
                break;
            }
        }
        add(
            "reduced",
            bad.is_none(),
            bad.unwrap_or_else(|| "R ∩ Rv = {±v}".into()),
        );

        let is_pos: Vec<bool> = {
            let mut m = vec![false; sys.len()];
            for &i in &sys.positive {
                m[i] = true;
            }
            m
        };
        let partition_ok = sys.roots.iter().enumerate().all(|(i, v)| {
            match sys.find(&negate(v)) {
                Some(j) => is_pos[i] != is_pos[j],
                None => false,
            }
        });
        add(
            "positive_partition",
            partition_ok,
            format!("|R+| = {}", sys.positive.len()),
        );

        let separated = match &sys.rule {
            PositiveRule::Lexicographic => sys.positive_roots().all(lex_positive),
            PositiveRule::Functional(w) => sys.positive_roots().all(|v| dot(v, w).is_positive()),
        };
        add(
            "positive_separated",
            separated,
            match &sys.rule {
                PositiveRule::Lexicographic => "lexicographic order".into(),
                PositiveRule::Functional(w) => format!("functional {}", fmt_vec(w)),
            },
        );

        let mut variance = None;
        'inv: for sigma in reflections.iter().flatten() {
            for (j, v) in sys.roots.iter().enumerate() {
                if let Some(k) = sys.find(&sigma.apply(v)) {
                    if !self.kappa[k].close_to(&self.kappa[j]) {
                        variance = Some(format!(
                            "κ({}) = {} but κ({}) = {}",
                            fmt_vec(v),
                            self.kappa[j],
                            fmt_vec(&sys.roots[k]),
                            self.kappa[k]
                        ));
                        break 'inv;
                    }
                }
            }
        }
        add(
            "kappa_invariance",
            variance.is_none(),
            variance.unwrap_or_else(|| "κ_{gv} = κ_v".into()),
        );

        let negative = self.kappa.iter().find(|k| k.is_negative());
        let (ok, detail) = match (negative, self.unchecked_kappa) {
            (None, _) => (true, "κ >= 0".to_string()),
            (Some(k), true) => (true, format!("negative κ = {k} accepted (unchecked)")),
            (Some(k), false) => (false, format!("negative κ = {k}")),
        };
        add("kappa_nonnegative", ok, detail);

        let recomputed = sum_positive(sys, &self.kappa);
        add(
            "gamma_consistent",
            recomputed.close_to(&self.gamma),
            format!("γ = {}", self.gamma),
        );

        ValidationReport { checks }
    }

    /// `h_κ(x)^2 = Π_{v ∈ R+} |<v, x>|^{2 κ_v}` in floating point.
    pub fn weight(&self, x: &[f64]) -> f64 {
        let mut w = 1.0;
        for (v, k) in self.positive_with_kappa() {
            if k.is_zero() {
                continue;
            }
            let s: f64 = v.iter().zip(x).map(|(a, b)| a.to_f64() * b).sum();
            w *= s.abs().powf(2.0 * k.to_f64());
        }
        w
    }

    /// `h_κ(x)^2` in the scalar field, available when every `2 κ_v` is a
    /// non-negative integer.
    pub fn weight_exact(&self, x: &[S]) -> Option<S> {
        let two = S::from_int(2);
        let mut w = S::one();
        for (v, k) in self.positive_with_kappa() {
            let e = (two.clone() * k.clone()).as_integer()?;
            if e < 0 {
                return None;
            }
            let s = dot(v, x).abs();
            for _ in 0..e {
                w = w * s.clone();
            }
        }
        Some(w)
    }

    /// Reflection of every positive root.
    pub fn reflections(&self) -> Vec<Reflection<S>> {
        self.system
            .positive_roots()
            .map(|v| Reflection::new(v).expect("roots are nonzero"))
            .collect()
    }

    /// All elements of the reflection group, identity first.
    pub fn group_elements(&self, cap: usize) -> Result<Vec<OrthogonalMap<S>>> {
        let gens: Vec<OrthogonalMap<S>> = self
            .reflections()
            .iter()
            .map(|r| OrthogonalMap {
                rows: r.matrix().to_vec(),
            })
            .collect();
        let mut elems = vec![OrthogonalMap::identity(self.dim())];
        let mut frontier = 0;
        while frontier < elems.len() {
            let g = elems[frontier].clone();
            frontier += 1;
            for s in &gens {
                let h = s.compose(&g);
                if !elems.iter().any(|e| e.close_to(&h)) {
                    elems.push(h);
                    if elems.len() > cap {
                        return Err(Error::ClosureExplosion { cap });
                    }
                }
            }
        }
        Ok(elems)
    }
}

fn sum_positive<S: Scalar>(system: &RootSystem<S>, kappa: &[S]) -> S {
    system
        .positive
        .iter()
        .fold(S::zero(), |acc, &i| acc + kappa[i].clone())
}

fn fmt_vec<S: Scalar>(v: &[S]) -> String {
    let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(","))
}

/// An element of `O(n)` stored as a dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthogonalMap<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> OrthogonalMap<S> {
    pub fn identity(dim: usize) -> Self {
        OrthogonalMap {
            rows: (0..dim)
                .map(|i| {
                    (0..dim)
                        .map(|k| if i == k { S::one() } else { S::zero() })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn apply(&self, x: &[S]) -> Vec<S> {
        self.rows.iter().map(|r| dot(r, x)).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.rows.len();
        OrthogonalMap {
            rows: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|k| {
                            (0..n).fold(S::zero(), |acc, j| {
                                acc + self.rows[i][j].clone() * other.rows[j][k].clone()
                            })
                        })
                        .collect()
                })
                .collect(),
        }
    }

    pub fn close_to(&self, other: &Self) -> bool {
        self.rows
            .iter()
            .zip(&other.rows)
            .all(|(a, b)| vec_close(a, b))
    }

    pub fn is_identity(&self) -> bool {
        self.close_to(&Self::identity(self.rows.len()))
    }
}
