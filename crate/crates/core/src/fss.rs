//! Finite-size-scaling collapse of order-parameter curves.
//!
//! Data `(α, q, e)` at several sizes `L` are mapped to `t = (α − α_c) L^{1/ν}`
//! and scored by how well each point agrees with the linear interpolation of
//! its sorted neighbours, weighted by the propagated standard errors. The
//! critical parameters are found by exhaustive search over a rectangular
//! grid; the uncertainty is read off the sublevel set `C ≤ (1 + r) C_min`.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::DataPoint;
use crate::error::{Error, Result};

/// Reference threshold of the random 3-XORSAT ensemble.
pub const ALPHA_C_THEORY: f64 = 0.918;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledTriple {
    pub t: f64,
    pub g: f64,
    pub e: f64,
}

fn is_positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

/// Evenly spaced values `min, min + step, …, max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl Axis {
    pub fn len(&self) -> usize {
        ((self.max - self.min) / self.step + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Indexed rather than accumulated so the grid has no drift.
    pub fn value(&self, i: usize) -> f64 {
        self.min + i as f64 * self.step
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !is_positive(self.step) {
            return Err(Error::Config(format!("{name}.step must be positive")));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(Error::Config(format!("{name} range is empty")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingGrid {
    pub alpha_c: Axis,
    pub nu: Axis,
    /// Contour level factor: the uncertainty region is `C ≤ (1 + r) C_min`.
    pub r: f64,
    /// Data with `|α − window_center| ≤ window_half_width` enter the fit.
    pub window_center: f64,
    pub window_half_width: f64,
}

impl Default for ScalingGrid {
    fn default() -> Self {
        Self {
            alpha_c: Axis { min: 0.85, max: 1.10, step: 0.001 },
            nu: Axis { min: 1.5, max: 4.0, step: 0.01 },
            r: 0.25,
            window_center: ALPHA_C_THEORY,
            window_half_width: 0.5,
        }
    }
}

impl ScalingGrid {
    pub fn validate(&self) -> Result<()> {
        self.alpha_c.validate("alpha_c")?;
        self.nu.validate("nu")?;
        if self.nu.min <= 0.0 {
            return Err(Error::Config("nu must be positive".into()));
        }
        if !is_positive(self.r) {
            return Err(Error::Config("r must be positive".into()));
        }
        if !is_positive(self.window_half_width) {
            return Err(Error::Config("window_half_width must be positive".into()));
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let g: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        g.validate()?;
        Ok(g)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    /// Points inside the α window.
    pub fn window<'a>(&self, points: &'a [DataPoint]) -> Vec<&'a DataPoint> {
        points
            .iter()
            .filter(|p| (p.alpha - self.window_center).abs() <= self.window_half_width + 1e-12)
            .collect()
    }
}

/// `t = (α − α_c) L^{1/ν}`, sorted ascending by `t` (stable).
pub fn transform<'a, I>(points: I, alpha_c: f64, nu: f64) -> Vec<ScaledTriple>
where
    I: IntoIterator<Item = &'a DataPoint>,
{
    assert!(nu > 0.0, "nu must be positive");
    let mut out: Vec<ScaledTriple> = points
        .into_iter()
        .map(|p| ScaledTriple {
            t: (p.alpha - alpha_c) * (p.size as f64).powf(1.0 / nu),
            g: p.q_mean,
            e: p.stderr,
        })
        .collect();
    out.sort_by(|a, b| a.t.total_cmp(&b.t));
    out
}

/// Squared deviation of the middle point from the chord of its neighbours,
/// in units of its propagated error. `None` when all three `t` coincide.
fn window_term(a: &ScaledTriple, b: &ScaledTriple, c: &ScaledTriple) -> Option<f64> {
    if a.t == b.t && b.t == c.t {
        return None;
    }
    let span = c.t - a.t;
    let wl = (c.t - b.t) / span;
    let wr = (a.t - b.t) / span;
    let g_bar = wl * a.g - wr * c.g;
    let var = b.e * b.e + wl * wl * a.e * a.e + wr * wr * c.e * c.e;
    let dev = b.g - g_bar;
    Some(if dev == 0.0 {
        0.0
    } else if var == 0.0 {
        f64::INFINITY
    } else {
        dev * dev / var
    })
}

/// Mean interpolation deviation over interior points of `t`-sorted triples.
pub fn cost(triples: &[ScaledTriple]) -> Result<f64> {
    if triples.len() < 3 {
        return Err(Error::Degenerate(format!(
            "cost needs at least 3 points, got {}",
            triples.len()
        )));
    }
    let mut sum = 0.0;
    let mut used = 0usize;
    for w in triples.windows(3) {
        if let Some(v) = window_term(&w[0], &w[1], &w[2]) {
            sum += v;
            used += 1;
        }
    }
    if used == 0 {
        return Err(Error::Degenerate("every window has identical t".into()));
    }
    Ok(sum / used as f64)
}

/// Cost over the grid, `alpha_c`-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CostSurface {
    pub alphas: Vec<f64>,
    pub nus: Vec<f64>,
    pub costs: Vec<f64>,
}

impl CostSurface {
    pub fn at(&self, ia: usize, inu: usize) -> f64 {
        self.costs[ia * self.nus.len() + inu]
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
        w.write_record(["alpha_c", "nu", "cost"]).map_err(|e| Error::csv(path, e))?;
        for (ia, a) in self.alphas.iter().enumerate() {
            for (inu, n) in self.nus.iter().enumerate() {
                w.write_record([a.to_string(), n.to_string(), self.at(ia, inu).to_string()])
                    .map_err(|e| Error::csv(path, e))?;
            }
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollapseResult {
    pub alpha_c_exp: f64,
    pub nu_exp: f64,
    pub c_min: f64,
    /// Half the width of the box circumscribing the contour region.
    pub uncertainty_alpha: f64,
    /// Half the height of the box circumscribing the contour region.
    pub uncertainty_nu: f64,
    /// The contour region reaches the edge of the grid, so the box is a lower
    /// bound on the true extent.
    pub unbounded: bool,
    pub n_points: usize,
    pub sizes: Vec<usize>,
    pub surface: CostSurface,
}

impl CollapseResult {
    pub fn report(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "alpha_c = {:.3} +/- {:.3}", self.alpha_c_exp, self.uncertainty_alpha);
        let _ = writeln!(s, "nu = {:.2} +/- {:.2}", self.nu_exp, self.uncertainty_nu);
        let _ = writeln!(s, "c_min = {:.6}", self.c_min);
        let _ = writeln!(s, "points = {}", self.n_points);
        let sizes: Vec<String> = self.sizes.iter().map(|l| l.to_string()).collect();
        let _ = writeln!(s, "sizes = {}", sizes.join(","));
        if self.unbounded {
            let _ = writeln!(s, "uncertainty = unbounded (contour touches grid edge)");
        }
        s
    }
}

/// Exhaustive minimization of [`cost`] over `grid`.
pub fn grid_search(points: &[DataPoint], grid: &ScalingGrid) -> Result<CollapseResult> {
    grid.validate()?;
    let data = grid.window(points);
    if data.is_empty() {
        return Err(Error::Empty("no data inside the alpha window"));
    }
    let mut sizes: Vec<usize> = data.iter().map(|p| p.size).collect();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(Error::Degenerate(format!(
            "collapse needs at least 2 system sizes, got {sizes:?}"
        )));
    }
    if data.len() < 3 {
        return Err(Error::Degenerate(format!(
            "collapse needs at least 3 points, got {}",
            data.len()
        )));
    }

    let alphas = grid.alpha_c.values();
    let nus = grid.nu.values();
    let costs: Vec<f64> = (0..alphas.len() * nus.len())
        .into_par_iter()
        .map(|k| {
            let (a, n) = (alphas[k / nus.len()], nus[k % nus.len()]);
            cost(&transform(data.iter().copied(), a, n)).unwrap_or(f64::INFINITY)
        })
        .collect();
    let surface = CostSurface { alphas, nus, costs };

    let mut best = 0;
    let mut ties = 0;
    for (k, &c) in surface.costs.iter().enumerate() {
        if c < surface.costs[best] {
            best = k;
            ties = 0;
        } else if c == surface.costs[best] && k != best {
            ties += 1;
        }
    }
    let c_min = surface.costs[best];
    if !c_min.is_finite() {
        return Err(Error::Degenerate("cost is infinite on the whole grid".into()));
    }
    let n_nu = surface.nus.len();
    let (ia, inu) = (best / n_nu, best % n_nu);
    if ties > 0 {
        log::info!(
            "{ties} grid cells tie the minimum cost {c_min}; reporting the lowest (alpha_c, nu)"
        );
    }

    let region = sublevel_component(&surface, (ia, inu), (1.0 + grid.r) * c_min);
    let (mut a_lo, mut a_hi, mut n_lo, mut n_hi) = (ia, ia, inu, inu);
    for &(a, n) in &region {
        a_lo = a_lo.min(a);
        a_hi = a_hi.max(a);
        n_lo = n_lo.min(n);
        n_hi = n_hi.max(n);
    }
    let unbounded =
        a_lo == 0 || n_lo == 0 || a_hi + 1 == surface.alphas.len() || n_hi + 1 == n_nu;

    Ok(CollapseResult {
        alpha_c_exp: surface.alphas[ia],
        nu_exp: surface.nus[inu],
        c_min,
        uncertainty_alpha: (surface.alphas[a_hi] - surface.alphas[a_lo]) / 2.0,
        uncertainty_nu: (surface.nus[n_hi] - surface.nus[n_lo]) / 2.0,
        unbounded,
        n_points: data.len(),
        sizes,
        surface,
    })
}

/// Grid cells 4-connected to `start` with cost at most `level`.
fn sublevel_component(s: &CostSurface, start: (usize, usize), level: f64) -> Vec<(usize, usize)> {
    let (na, nn) = (s.alphas.len(), s.nus.len());
    let mut seen = vec![false; na * nn];
    let mut stack = vec![start];
    let mut out = Vec::new();
    seen[start.0 * nn + start.1] = true;
    while let Some((a, n)) = stack.pop() {
        out.push((a, n));
        let mut visit = |a2: usize, n2: usize| {
            let k = a2 * nn + n2;
            if !seen[k] && s.costs[k] <= level {
                seen[k] = true;
                stack.push((a2, n2));
            }
        };
        if a > 0 {
            visit(a - 1, n);
        }
        if a + 1 < na {
            visit(a + 1, n);
        }
        if n > 0 {
            visit(a, n - 1);
        }
        if n + 1 < nn {
            visit(a, n + 1);
        }
    }
    out
}
