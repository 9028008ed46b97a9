//! Penalized nonlinearity: the clamp f̃, the splice g at radius R, its
//! antiderivative G and the odd extension.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, RwLock};

use crate::error::{Error, Result};
use crate::numerics::logspace;
use crate::numerics::quad::integrate;
use crate::problem::ProblemSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// k f < −V s: value −V s/k.
    Lower,
    /// −V s ≤ k f ≤ V s: value f.
    Middle,
    /// k f > V s: value V s/k.
    Upper,
}

const SCAN_LO: f64 = 1e-12;
const SCAN_HI: f64 = 1e6;
const SCAN_NODES: usize = 256;

/// Branch structure of s ↦ f̃(r, s) on s > 0 at a fixed radius, with
/// cumulative integrals at the breakpoints.
#[derive(Debug, Clone)]
pub struct BranchMap {
    r: f64,
    v: f64,
    breaks: Vec<f64>,
    branches: Vec<Branch>,
    cumulative: Vec<f64>,
}

/// Clamped nonlinearity with k = 2θ/(θ−2).
#[derive(Debug)]
pub struct PenalizedNonlinearity {
    spec: ProblemSpec,
    k: f64,
    cache: RwLock<HashMap<usize, Arc<BranchMap>>>,
    fallbacks: AtomicUsize,
}

pub fn make_penalized(spec: &ProblemSpec) -> Result<PenalizedNonlinearity> {
    PenalizedNonlinearity::new(spec)
}

impl PenalizedNonlinearity {
    pub fn new(spec: &ProblemSpec) -> Result<Self> {
        let theta = spec.theta;
        if !(theta > 2.0 && theta.is_finite()) {
            return Err(Error::domain(format!("penalization needs theta > 2, got {theta}")));
        }
        Ok(PenalizedNonlinearity {
            spec: spec.clone(),
            k: 2.0 * theta / (theta - 2.0),
            cache: RwLock::new(HashMap::new()),
            fallbacks: AtomicUsize::new(0),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn odd(&self) -> bool {
        self.spec.odd
    }

    /// Number of antiderivative evaluations that fell back to direct quadrature.
    pub fn fallback_count(&self) -> usize {
        self.fallbacks.load(Ordering::Relaxed)
    }

    fn classify(&self, r: f64, v: f64, s: f64) -> Branch {
        let kf = self.k * self.spec.f(r, s);
        if kf < -v * s {
            Branch::Lower
        } else if kf <= v * s {
            Branch::Middle
        } else {
            Branch::Upper
        }
    }

    fn branch_value(&self, branch: Branch, r: f64, v: f64, s: f64) -> f64 {
        match branch {
            Branch::Lower => -v * s / self.k,
            Branch::Middle => self.spec.f(r, s),
            Branch::Upper => v * s / self.k,
        }
    }

    fn tilde_pos(&self, r: f64, s: f64) -> f64 {
        let v = self.spec.v(r);
        let f = self.spec.f(r, s);
        let kf = self.k * f;
        if kf < -v * s {
            -v * s / self.k
        } else if kf <= v * s {
            f
        } else {
            v * s / self.k
        }
    }

    /// f̃(r, s).
    pub fn f_tilde(&self, r: f64, s: f64) -> f64 {
        if s > 0.0 {
            self.tilde_pos(r, s)
        } else if self.spec.odd && s < 0.0 {
            -self.tilde_pos(r, -s)
        } else {
            0.0
        }
    }

    /// g(r, s): f inside B_R, f̃ outside (odd extension in odd mode).
    pub fn g(&self, r: f64, s: f64) -> f64 {
        if r <= self.spec.radius {
            self.spec.f(r, s)
        } else {
            self.f_tilde(r, s)
        }
    }

    /// ∂g/∂s(r, s), one-sided at branch crossings.
    pub fn g_s(&self, r: f64, s: f64) -> f64 {
        if r <= self.spec.radius {
            return self.spec.f_s(r, s);
        }
        let t = if self.spec.odd { s.abs() } else { s };
        if t <= 0.0 {
            return 0.0;
        }
        let v = self.spec.v(r);
        match self.classify(r, v, t) {
            Branch::Lower => -v / self.k,
            Branch::Middle => self.spec.f_s(r, t),
            Branch::Upper => v / self.k,
        }
    }

    /// G(r, s) = ∫₀ˢ g(r, t) dt, without caching.
    pub fn big_g(&self, r: f64, s: f64) -> f64 {
        if r <= self.spec.radius {
            return self.spec.big_f(r, s);
        }
        let t = self.reduce(s);
        if t == 0.0 {
            return 0.0;
        }
        match self.build_map(r) {
            Some(map) => map.integral(self, t),
            None => self.direct_quadrature(r, t),
        }
    }

    /// G at a grid node; the branch map is memoized per node index.
    pub fn big_g_node(&self, node: usize, r: f64, s: f64) -> f64 {
        if r <= self.spec.radius {
            return self.spec.big_f(r, s);
        }
        let t = self.reduce(s);
        if t == 0.0 {
            return 0.0;
        }
        match self.branch_map(node, r) {
            Some(map) => map.integral(self, t),
            None => self.direct_quadrature(r, t),
        }
    }

    /// Memoized branch map for node `node` at radius `r` (None inside B_R or if bracketing failed).
    pub fn branch_map(&self, node: usize, r: f64) -> Option<Arc<BranchMap>> {
        if r <= self.spec.radius {
            return None;
        }
        if let Some(m) = self.cache.read().expect("branch cache poisoned").get(&node) {
            return Some(Arc::clone(m));
        }
        let map = Arc::new(self.build_map(r)?);
        let mut w = self.cache.write().expect("branch cache poisoned");
        Some(Arc::clone(w.entry(node).or_insert(map)))
    }

    /// Antiderivative from a precomputed map, with the same reduction rules as [`Self::big_g`].
    pub fn big_g_with(&self, map: Option<&BranchMap>, r: f64, s: f64) -> f64 {
        if r <= self.spec.radius {
            return self.spec.big_f(r, s);
        }
        let t = self.reduce(s);
        if t == 0.0 {
            return 0.0;
        }
        match map {
            Some(m) => m.integral(self, t),
            None => self.direct_quadrature(r, t),
        }
    }

    fn reduce(&self, s: f64) -> f64 {
        if self.spec.odd {
            s.abs()
        } else if s > 0.0 {
            s
        } else {
            0.0
        }
    }

    fn direct_quadrature(&self, r: f64, t: f64) -> f64 {
        self.fallbacks.fetch_add(1, Ordering::Relaxed);
        integrate(|x| self.tilde_pos(r, x), 0.0, t, 1e-300, 1e-13).value
    }

    fn locate(&self, r: f64, v: f64, a: f64, b: f64, left: Branch) -> Option<f64> {
        let (mut lo, mut hi) = (a, b);
        for _ in 0..400 {
            if hi - lo <= 1e-14 * hi {
                return Some(0.5 * (lo + hi));
            }
            let mid = 0.5 * (lo + hi);
            let c = self.classify(r, v, mid);
            if !(mid > lo && mid < hi) {
                return Some(mid);
            }
            if c == left {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        None
    }

    fn build_map(&self, r: f64) -> Option<BranchMap> {
        let v = self.spec.v(r);
        let nodes = logspace(SCAN_LO, SCAN_HI, SCAN_NODES);
        let classes: Vec<Branch> = nodes.iter().map(|&t| self.classify(r, v, t)).collect();
        if nodes.iter().any(|&t| self.spec.f(r, t).is_nan()) {
            return None;
        }
        let mut breaks = vec![0.0];
        let mut branches = vec![classes[0]];
        for i in 0..nodes.len() - 1 {
            let mut left = classes[i];
            let mut a = nodes[i];
            let b = nodes[i + 1];
            // more than one crossing inside a cell is resolved by repeated location
            let mut guard = 0;
            while left != classes[i + 1] {
                let x = self.locate(r, v, a, b, left)?;
                let next = self.classify(r, v, (x * (1.0 + 1e-13)).min(b));
                breaks.push(x);
                branches.push(if next == left { classes[i + 1] } else { next });
                left = *branches.last().unwrap();
                a = x;
                guard += 1;
                if guard > 4 {
                    break;
                }
            }
        }
        let mut cumulative = Vec::with_capacity(breaks.len());
        let mut acc = 0.0;
        let mut map = BranchMap {
            r,
            v,
            breaks,
            branches,
            cumulative: Vec::new(),
        };
        for j in 0..map.breaks.len() {
            cumulative.push(acc);
            if j + 1 < map.breaks.len() {
                acc += map.piece(self, j, map.breaks[j], map.breaks[j + 1]);
            }
        }
        map.cumulative = cumulative;
        Some(map)
    }
}

impl BranchMap {
    pub fn breakpoints(&self) -> &[f64] {
        &self.breaks[1..]
    }

    fn piece(&self, pen: &PenalizedNonlinearity, j: usize, a: f64, b: f64) -> f64 {
        match self.branches[j] {
            Branch::Lower => -self.v * (b * b - a * a) / (2.0 * pen.k),
            Branch::Upper => self.v * (b * b - a * a) / (2.0 * pen.k),
            Branch::Middle => {
                let spec = &pen.spec;
                if spec.nonlinearity.has_closed_antiderivative() {
                    spec.big_f(self.r, b) - spec.big_f(self.r, a)
                } else {
                    integrate(|t| pen.branch_value(Branch::Middle, self.r, self.v, t), a, b, 1e-300, 1e-13).value
                }
            }
        }
    }

    /// ∫₀ᵗ f̃(r, x) dx for t > 0.
    pub fn integral(&self, pen: &PenalizedNonlinearity, t: f64) -> f64 {
        let j = self.breaks.partition_point(|&b| b <= t).saturating_sub(1);
        self.cumulative[j] + self.piece(pen, j, self.breaks[j], t)
    }
}
