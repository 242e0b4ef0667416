//! Star-shaped planar obstacles: the class X(m, β, R0, δ) of radial subgraphs,
//! Hausdorff distances between them, δ-discrete packings built from bumps,
//! and the visibility measure of a convex hull.

use rayon::prelude::*;
use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("invalid class: {0}")]
    BadClass(String),
    #[error("profile leaves the class: {0}")]
    OutsideClass(String),
    #[error("invalid profile: {0}")]
    BadProfile(String),
    #[error("packing infeasible: {0}")]
    Infeasible(String),
    #[error("point lies inside the convex hull")]
    InteriorPoint,
    #[error("shape text, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Parameters (m, β, R0, δ) of the class X(m, β, R0, δ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObstacleClass {
    pub m: usize,
    pub beta: f64,
    pub r0: f64,
    pub delta: f64,
}

impl ObstacleClass {
    pub fn new(m: usize, beta: f64, r0: f64, delta: f64) -> Result<Self, GeometryError> {
        if m < 1 || !(r0 > 0.0 && delta > 0.0 && r0 + delta <= beta && beta.is_finite()) {
            return Err(GeometryError::BadClass(format!(
                "need m >= 1, R0 > 0, delta > 0, R0 + delta <= beta; got m = {m}, beta = {beta}, R0 = {r0}, delta = {delta}"
            )));
        }
        Ok(Self { m, beta, r0, delta })
    }
}

/// Polynomial bump (4s(1−s))^p on s ∈ [0, 1], vanishing with its first p−1
/// derivatives at both ends.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyBump {
    order: usize,
    /// Coefficients in s, lowest degree first.
    coeffs: Vec<f64>,
}

impl PolyBump {
    pub fn new(order: usize) -> Self {
        let mut coeffs = vec![0.0; 2 * order + 1];
        let mut binom = 1.0;
        for q in 0..=order {
            let sign = if q % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[order + q] = 4f64.powi(order as i32) * sign * binom;
            binom = binom * (order - q) as f64 / (q + 1) as f64;
        }
        Self { order, coeffs }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// i-th derivative at s; zero outside [0, 1].
    pub fn derivative(&self, s: f64, i: usize) -> f64 {
        if !(0.0..=1.0).contains(&s) || i >= self.coeffs.len() {
            return 0.0;
        }
        let mut acc = 0.0;
        for (d, &c) in self.coeffs.iter().enumerate().skip(i).rev() {
            let falling: f64 = ((d - i + 1)..=d).map(|x| x as f64).product();
            acc = acc * s + c * falling;
        }
        acc
    }

    /// Upper bound on sup |b⁽ⁱ⁾| over [0, 1]: the maximum on a fine grid plus
    /// half a grid step times the maximum of the next derivative.
    pub fn sup_derivative(&self, i: usize) -> f64 {
        const M: usize = 20_000;
        let h = 1.0 / M as f64;
        let (mut top, mut next) = (0.0f64, 0.0f64);
        for t in 0..=M {
            let s = t as f64 * h;
            top = top.max(self.derivative(s, i).abs());
            next = next.max(self.derivative(s, i + 1).abs());
        }
        top + 0.5 * h * next
    }
}

/// Radial profile g(θ) of a star-shaped obstacle.
#[derive(Clone, Debug, PartialEq)]
pub enum Profile {
    /// g = a₀ + Σ_{j≥1} (a_j cos jθ + b_j sin jθ); `sin[0]` is ignored.
    Fourier { cos: Vec<f64>, sin: Vec<f64> },
    /// g = base + height·Σ_{active cells c} b((θ − 2πc/cells)/(2π/cells)).
    Bumps {
        base: f64,
        height: f64,
        cells: usize,
        bump: PolyBump,
        active: Vec<bool>,
    },
}

impl Profile {
    pub fn disc(radius: f64) -> Self {
        Profile::Fourier {
            cos: vec![radius],
            sin: vec![0.0],
        }
    }

    /// i-th derivative of g at θ.
    pub fn derivative(&self, theta: f64, i: usize) -> f64 {
        match self {
            Profile::Fourier { cos, sin } => {
                let mut v = if i == 0 {
                    cos.first().copied().unwrap_or(0.0)
                } else {
                    0.0
                };
                let len = cos.len().max(sin.len());
                for j in 1..len {
                    let a = cos.get(j).copied().unwrap_or(0.0);
                    let b = sin.get(j).copied().unwrap_or(0.0);
                    let jf = j as f64;
                    let (s, c) = (jf * theta).sin_cos();
                    // d^i/dθ^i of cos(jθ), sin(jθ) cycle with period 4.
                    let (dc, ds) = match i % 4 {
                        0 => (c, s),
                        1 => (-s, c),
                        2 => (-c, -s),
                        _ => (s, -c),
                    };
                    v += jf.powi(i as i32) * (a * dc + b * ds);
                }
                v
            }
            Profile::Bumps {
                base,
                height,
                cells,
                bump,
                active,
            } => {
                let w = TAU / *cells as f64;
                let t = theta.rem_euclid(TAU);
                let c = ((t / w).floor() as usize).min(cells - 1);
                let mut v = if i == 0 { *base } else { 0.0 };
                if active[c] {
                    let s = (t - c as f64 * w) / w;
                    v += height * bump.derivative(s, i) / w.powi(i as i32);
                }
                v
            }
        }
    }

    pub fn radius(&self, theta: f64) -> f64 {
        self.derivative(theta, 0)
    }
}

/// Obstacle Σ(g) = {ρω : 0 ≤ ρ ≤ g(ω)} with g in a declared class.
#[derive(Clone, Debug, PartialEq)]
pub struct StarBoundary {
    profile: Profile,
    class: ObstacleClass,
}

const CHECK_GRID: usize = 4096;

fn theta_grid(n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| TAU * i as f64 / n as f64)
}

/// max_{i ≤ m} sup_θ |g⁽ⁱ⁾(θ)| on a dense grid.
pub fn cm_norm(profile: &Profile, m: usize) -> f64 {
    match profile {
        Profile::Bumps {
            base,
            height,
            cells,
            bump,
            active,
        } => {
            let w = TAU / *cells as f64;
            let any = active.iter().any(|&a| a);
            let mut norm = base + if any { *height } else { 0.0 };
            if any {
                for i in 1..=m {
                    norm = norm.max(height * bump.sup_derivative(i) / w.powi(i as i32));
                }
            }
            norm
        }
        Profile::Fourier { .. } => (0..=m)
            .map(|i| {
                theta_grid(CHECK_GRID)
                    .map(|t| profile.derivative(t, i).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max),
    }
}

impl StarBoundary {
    /// Checks R0 ≤ g ≤ R0 + δ and ‖g‖_{C^m} ≤ β on a dense grid.
    pub fn new(profile: Profile, class: ObstacleClass) -> Result<Self, GeometryError> {
        let (lo, hi) = radial_range(&profile);
        let tol = 1e-12 * class.beta;
        if lo < class.r0 - tol || hi > class.r0 + class.delta + tol {
            return Err(GeometryError::OutsideClass(format!(
                "g ranges over [{lo}, {hi}], outside [{}, {}]",
                class.r0,
                class.r0 + class.delta
            )));
        }
        let norm = cm_norm(&profile, class.m);
        if norm > class.beta + tol {
            return Err(GeometryError::OutsideClass(format!(
                "C^{} norm {norm} exceeds beta = {}",
                class.m, class.beta
            )));
        }
        Ok(Self { profile, class })
    }

    /// The tightest class of order m containing the profile.
    pub fn fitted(profile: Profile, m: usize) -> Result<Self, GeometryError> {
        let (lo, hi) = radial_range(&profile);
        if !(lo > 0.0) {
            return Err(GeometryError::BadProfile(format!(
                "profile must stay positive, min = {lo}"
            )));
        }
        let delta = (hi - lo).max(1e-12 * hi);
        let beta = cm_norm(&profile, m).max(lo + delta);
        let class = ObstacleClass::new(m, beta, lo, delta)?;
        Ok(Self { profile, class })
    }

    pub fn disc(radius: f64) -> Self {
        Self::fitted(Profile::disc(radius), 2).expect("a disc of positive radius fits its class")
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }
    pub fn class(&self) -> ObstacleClass {
        self.class
    }

    pub fn radius(&self, theta: f64) -> f64 {
        self.profile.radius(theta)
    }

    /// x(θ) = g(θ)(cos θ, sin θ)
    pub fn point(&self, theta: f64) -> [f64; 2] {
        let g = self.radius(theta);
        [g * theta.cos(), g * theta.sin()]
    }

    /// (x(θ), x′(θ), x″(θ))
    pub fn point_derivatives(&self, theta: f64) -> ([f64; 2], [f64; 2], [f64; 2]) {
        let g = self.profile.derivative(theta, 0);
        let g1 = self.profile.derivative(theta, 1);
        let g2 = self.profile.derivative(theta, 2);
        let (s, c) = theta.sin_cos();
        (
            [g * c, g * s],
            [g1 * c - g * s, g1 * s + g * c],
            [g2 * c - 2.0 * g1 * s - g * c, g2 * s + 2.0 * g1 * c - g * s],
        )
    }

    pub fn boundary_samples(&self, n: usize) -> Vec<[f64; 2]> {
        theta_grid(n).map(|t| self.point(t)).collect()
    }

    /// ℋ¹(∂Σ) by the trapezoid rule (spectral for trigonometric profiles).
    pub fn perimeter(&self) -> f64 {
        let n = 4096;
        theta_grid(n)
            .map(|t| {
                let g = self.profile.derivative(t, 0);
                let g1 = self.profile.derivative(t, 1);
                (g * g + g1 * g1).sqrt()
            })
            .sum::<f64>()
            * TAU
            / n as f64
    }

    /// max g, the radius of the smallest centred disc containing Σ.
    pub fn outer_radius(&self) -> f64 {
        radial_range(&self.profile).1
    }

    /// Whether x lies in Σ.
    pub fn contains(&self, x: [f64; 2]) -> bool {
        let r = x[0].hypot(x[1]);
        r <= self.radius(x[1].atan2(x[0]))
    }

    /// Plain-text form: one `j a_j b_j` line per Fourier term, or a
    /// `bumps base height cells order mask` line, then `m beta R0 delta`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match &self.profile {
            Profile::Fourier { cos, sin } => {
                for j in 0..cos.len().max(sin.len()) {
                    let a = cos.get(j).copied().unwrap_or(0.0);
                    let b = if j == 0 {
                        0.0
                    } else {
                        sin.get(j).copied().unwrap_or(0.0)
                    };
                    let _ = writeln!(out, "{j} {a} {b}");
                }
            }
            Profile::Bumps {
                base,
                height,
                cells,
                bump,
                active,
            } => {
                let mask: String = active.iter().map(|&a| if a { '1' } else { '0' }).collect();
                let _ = writeln!(out, "bumps {base} {height} {cells} {} {mask}", bump.order());
            }
        }
        let c = self.class;
        let _ = writeln!(out, "{} {} {} {}", c.m, c.beta, c.r0, c.delta);
        out
    }

    /// Parse [`StarBoundary::to_text`] output; `#` starts a comment. Without a
    /// class line the tightest C² class is fitted.
    pub fn from_text(text: &str) -> Result<Self, GeometryError> {
        let perr = |line: usize, msg: String| GeometryError::Parse { line, msg };
        let mut cos = Vec::new();
        let mut sin = Vec::new();
        let mut bumps = None;
        let mut class = None;
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let n = n + 1;
            let f: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| s.parse::<f64>().map_err(|e| perr(n, format!("{s}: {e}")));
            let int = |s: &str| s.parse::<usize>().map_err(|e| perr(n, format!("{s}: {e}")));
            match f.len() {
                6 if f[0] == "bumps" => {
                    let cells = int(f[3])?;
                    let active: Vec<bool> = f[5].chars().map(|c| c == '1').collect();
                    if cells == 0 || active.len() != cells {
                        return Err(perr(n, "mask length must equal the cell count".into()));
                    }
                    bumps = Some(Profile::Bumps {
                        base: num(f[1])?,
                        height: num(f[2])?,
                        cells,
                        bump: PolyBump::new(int(f[4])?),
                        active,
                    });
                }
                3 => {
                    let j = int(f[0])?;
                    if cos.len() <= j {
                        cos.resize(j + 1, 0.0);
                        sin.resize(j + 1, 0.0);
                    }
                    cos[j] = num(f[1])?;
                    sin[j] = num(f[2])?;
                }
                4 => {
                    class = Some(
                        ObstacleClass::new(int(f[0])?, num(f[1])?, num(f[2])?, num(f[3])?)
                            .map_err(|e| perr(n, e.to_string()))?,
                    );
                }
                _ => return Err(perr(n, format!("unrecognised line `{line}`"))),
            }
        }
        let profile = match (bumps, cos.is_empty()) {
            (Some(p), true) => p,
            (None, false) => Profile::Fourier { cos, sin },
            (Some(_), false) => return Err(perr(0, "both Fourier and bump lines given".into())),
            (None, true) => return Err(perr(0, "no profile lines".into())),
        };
        match class {
            Some(c) => Self::new(profile, c),
            None => Self::fitted(profile, 2),
        }
    }
}

fn radial_range(profile: &Profile) -> (f64, f64) {
    if let Profile::Bumps {
        base,
        height,
        active,
        ..
    } = profile
    {
        let top = if active.iter().any(|&a| a) {
            base + height
        } else {
            *base
        };
        return (*base, top);
    }
    theta_grid(CHECK_GRID)
        .map(|t| profile.radius(t))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), g| {
            (lo.min(g), hi.max(g))
        })
}

/// Bump profiles built on the same arcs, base and height.
fn same_bump_layout(p: &Profile, q: &Profile) -> bool {
    match (p, q) {
        (
            Profile::Bumps {
                base: b1,
                height: h1,
                cells: c1,
                bump: o1,
                ..
            },
            Profile::Bumps {
                base: b2,
                height: h2,
                cells: c2,
                bump: o2,
                ..
            },
        ) => b1 == b2 && h1 == h2 && c1 == c2 && o1 == o2,
        _ => false,
    }
}

/// g_p(θ) − g_q(φ), without cancelling the common base of bump profiles.
fn radial_difference(p: &Profile, theta: f64, q: &Profile, phi: f64) -> f64 {
    if let (Profile::Bumps { base, .. }, true) = (p, same_bump_layout(p, q)) {
        return (p.radius(theta) - base) - (q.radius(phi) - base);
    }
    p.radius(theta) - q.radius(phi)
}

/// |x_p(θ) − x_q(φ)| written as (g_p(θ) − g_q(φ))e(θ) + g_q(φ)(e(θ) − e(φ)),
/// which keeps full relative accuracy when the two points nearly coincide.
fn boundary_distance(p: &Profile, theta: f64, q: &Profile, phi: f64) -> f64 {
    let dg = radial_difference(p, theta, q, phi);
    let gq = q.radius(phi);
    let half = 0.5 * (theta - phi);
    let mid = 0.5 * (theta + phi);
    let chord = 2.0 * half.sin() * gq;
    let x = dg * theta.cos() - chord * mid.sin();
    let y = dg * theta.sin() + chord * mid.cos();
    x.hypot(y)
}

/// sup_θ |g1(θ) − g2(θ)|, an upper bound for the Hausdorff distance of
/// radial subgraphs with a common centre.
pub fn radial_gap(s1: &StarBoundary, s2: &StarBoundary) -> f64 {
    theta_grid(CHECK_GRID)
        .map(|t| (s1.radius(t) - s2.radius(t)).abs())
        .fold(0.0, f64::max)
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

/// Golden-section minimisation of f on [a, b].
fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    // The bracket cannot shrink below one ulp, hence the iteration cap.
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Distance from x1(θ), a point outside Σ2, to ∂Σ2.
///
/// A boundary point at angle φ lies at least |x1|·|sin(θ−φ)| away, so only
/// the window |θ−φ| ≤ arcsin(d0/|x1|) around the radial candidate at
/// distance d0 = g1(θ) − g2(θ) can do better.
fn distance_to_boundary(p1: &Profile, theta: f64, p2: &Profile) -> f64 {
    const WINDOW_SAMPLES: usize = 64;
    let d0 = radial_difference(p1, theta, p2, theta);
    let r = p1.radius(theta);
    let width = if d0 < r { (d0 / r).asin() } else { PI };
    let h = 2.0 * width / WINDOW_SAMPLES as f64;
    let f = |phi: f64| boundary_distance(p1, theta, p2, phi);
    let (best_phi, best) = (0..=WINDOW_SAMPLES)
        .map(|i| theta - width + i as f64 * h)
        .map(|phi| (phi, f(phi)))
        .fold((theta, d0), |acc, x| if x.1 < acc.1 { x } else { acc });
    let refined = golden_min(f, best_phi - h, best_phi + h, 1e-3 * h.max(1e-300)).1;
    best.min(refined).min(d0)
}

/// Arcs of θ where g1(θ) > g2(θ) can occur, with a sample count for each.
fn candidate_arcs(p1: &Profile, p2: &Profile) -> Vec<(f64, f64, usize)> {
    const FULL: usize = 2048;
    const PER_CELL: usize = 256;
    match (p1, p2, same_bump_layout(p1, p2)) {
        (
            Profile::Bumps {
                cells, active: a1, ..
            },
            Profile::Bumps { active: a2, .. },
            true,
        ) => {
            let w = TAU / *cells as f64;
            (0..*cells)
                .filter(|&c| a1[c] && !a2[c])
                .map(|c| (c as f64 * w, (c + 1) as f64 * w, PER_CELL))
                .collect()
        }
        _ => vec![(0.0, TAU, FULL)],
    }
}

/// sup over ∂Σ1 of the distance to Σ2 (zero for points inside Σ2).
fn directed_hausdorff(s1: &StarBoundary, s2: &StarBoundary) -> f64 {
    let (p1, p2) = (&s1.profile, &s2.profile);
    let excess = |t: f64| {
        if radial_difference(p1, t, p2, t) <= 0.0 {
            0.0
        } else {
            distance_to_boundary(p1, t, p2)
        }
    };
    candidate_arcs(p1, p2)
        .into_par_iter()
        .map(|(a, b, n)| {
            let h = (b - a) / n as f64;
            let (best, top) = (0..=n)
                .map(|i| a + i as f64 * h)
                .map(|t| (t, excess(t)))
                .fold((a, 0.0f64), |acc, x| if x.1 > acc.1 { x } else { acc });
            if top == 0.0 {
                return 0.0;
            }
            let refined = -golden_min(|u| -excess(u), best - h, best + h, 1e-6 * h).1;
            top.max(refined)
        })
        .reduce(|| 0.0, f64::max)
}

/// Hausdorff distance between the radial subgraphs Σ(g1) and Σ(g2).
///
/// The farthest point of Σ1 from Σ2 lies on ∂Σ1, so only boundary points
/// outside Σ2 are examined: dense sampling of the arcs where g1 > g2 is
/// possible, a windowed nearest-point search on ∂Σ2, then golden-section
/// refinement of the supremum.
pub fn hausdorff_distance(s1: &StarBoundary, s2: &StarBoundary) -> f64 {
    directed_hausdorff(s1, s2).max(directed_hausdorff(s2, s1))
}

/// Brute-force double supremum over n boundary samples of each shape, with
/// membership of the other filled set tested exactly.
pub fn hausdorff_point_cloud(s1: &StarBoundary, s2: &StarBoundary, n: usize) -> f64 {
    let one_way = |a: &StarBoundary, b: &StarBoundary| {
        let pa = a.boundary_samples(n);
        let pb = b.boundary_samples(n);
        pa.par_iter()
            .filter(|&&p| !b.contains(p))
            .map(|&p| pb.iter().map(|&q| dist(p, q)).fold(f64::INFINITY, f64::min))
            .reduce(|| 0.0, f64::max)
    };
    one_way(s1, s2).max(one_way(s2, s1))
}

/// A δ-separated family of class members.
#[derive(Clone, Debug)]
pub struct DeltaDiscreteSet {
    pub members: Vec<StarBoundary>,
    pub cells: usize,
    /// Guaranteed pairwise Hausdorff separation (the bump height).
    pub separation: f64,
}

/// Members R0 + δ·Σ_{c∈S} b_c(θ) for subsets S of equal-width arcs, with b the
/// polynomial bump of order m+1 (so every member is C^m). The arc count is the
/// largest one keeping ‖g‖_{C^m} ≤ β; two members differing on arc c are at
/// Hausdorff distance at least δ (the peak of one bump sits at distance δ from
/// the other set).
pub fn build_delta_discrete(
    delta: f64,
    class: ObstacleClass,
    delta0: f64,
    target_count: usize,
) -> Result<DeltaDiscreteSet, GeometryError> {
    if !(delta > 0.0 && delta <= delta0) {
        return Err(GeometryError::Infeasible(format!(
            "need 0 < delta <= delta0 = {delta0}, got {delta}"
        )));
    }
    if delta > class.delta {
        return Err(GeometryError::Infeasible(format!(
            "bump height {delta} exceeds the class width {}",
            class.delta
        )));
    }
    let bump = PolyBump::new(class.m + 1);
    // Width w must satisfy δ·sup|b⁽ⁱ⁾|/w^i ≤ β for 1 ≤ i ≤ m.
    let w_min = (1..=class.m)
        .map(|i| (delta * bump.sup_derivative(i) / class.beta).powf(1.0 / i as f64))
        .fold(0.0, f64::max);
    let mut cells = (TAU / w_min).floor() as usize;
    // Peaks of neighbouring arcs must not come closer than δ: 2(R0+δ)sin(π/(2·cells)) ≥ δ.
    while cells > 0 && 2.0 * (class.r0 + delta) * (PI / (2.0 * cells as f64)).sin() < delta {
        cells -= 1;
    }
    if cells == 0 {
        return Err(GeometryError::Infeasible(format!(
            "no arc is wide enough for a bump of height {delta} under beta = {}",
            class.beta
        )));
    }
    let count = if cells >= usize::BITS as usize - 1 {
        target_count
    } else {
        target_count.min(1usize << cells)
    };
    let members = (0..count)
        .map(|code| {
            let active = (0..cells)
                .map(|c| c < usize::BITS as usize && (code >> c) & 1 == 1)
                .collect();
            let profile = Profile::Bumps {
                base: class.r0,
                height: delta,
                cells,
                bump: bump.clone(),
                active,
            };
            StarBoundary::new(profile, class)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DeltaDiscreteSet {
        members,
        cells,
        separation: delta,
    })
}

/// log of the packing count 2^{−N}·δ0^{(N−1)/m}·δ^{−(N−1)/m}.
pub fn packing_lower_bound(delta: f64, delta0: f64, dim: usize, m: usize) -> f64 {
    let e = (dim as f64 - 1.0) / m as f64;
    2f64.powi(-(dim as i32)) * (delta0 / delta).powf(e)
}

/// Convex polygon, counterclockwise.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexHullK {
    vertices: Vec<[f64; 2]>,
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

impl ConvexHullK {
    /// Monotone-chain hull of a point set.
    pub fn from_points(mut pts: Vec<[f64; 2]>) -> Self {
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        pts.dedup();
        if pts.len() < 3 {
            return Self { vertices: pts };
        }
        let mut hull: Vec<[f64; 2]> = Vec::with_capacity(2 * pts.len());
        for pass in 0..2 {
            let start = hull.len();
            let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
                Box::new(pts.iter())
            } else {
                Box::new(pts.iter().rev())
            };
            for &p in iter {
                while hull.len() >= start + 2
                    && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
                {
                    hull.pop();
                }
                hull.push(p);
            }
            hull.pop();
        }
        Self { vertices: hull }
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    /// h(x̂) = max over vertices of x̂·v.
    pub fn support(&self, direction: [f64; 2]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v[0] * direction[0] + v[1] * direction[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: [f64; 2]) -> bool {
        let n = self.vertices.len();
        (0..n).all(|i| cross(self.vertices[i], self.vertices[(i + 1) % n], x) >= 0.0)
    }

    /// min and max distance of the vertices from the origin.
    pub fn radial_extent(&self) -> (f64, f64) {
        self.vertices
            .iter()
            .map(|v| v[0].hypot(v[1]))
            .fold((f64::INFINITY, 0.0), |(lo, hi), r| (lo.min(r), hi.max(r)))
    }
}

/// Convex hull of dense boundary samples of Σ1 ∪ Σ2.
pub fn convex_hull_union(s1: &StarBoundary, s2: &StarBoundary, samples: usize) -> ConvexHullK {
    let mut pts = s1.boundary_samples(samples);
    pts.extend(s2.boundary_samples(samples));
    ConvexHullK::from_points(pts)
}

/// Measure of the directions x̂ for which x lies strictly beyond the
/// supporting line of K with outer normal x̂, i.e. x̂·x > h(x̂).
///
/// For x outside a convex K these directions form one arc around x/|x|'s
/// visible side; its endpoints are located by bisection after a coarse scan.
pub fn visibility_measure(k: &ConvexHullK, x: [f64; 2]) -> Result<f64, GeometryError> {
    if k.contains(x) {
        return Err(GeometryError::InteriorPoint);
    }
    let excess = |phi: f64| {
        let d = [phi.cos(), phi.sin()];
        d[0] * x[0] + d[1] * x[1] - k.support(d)
    };
    const SCAN: usize = 4096;
    let h = TAU / SCAN as f64;
    let values: Vec<f64> = (0..SCAN).map(|i| excess(i as f64 * h)).collect();
    let (peak, _) = values
        .iter()
        .enumerate()
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc },
        );
    let centre = peak as f64 * h;
    if excess(centre) <= 0.0 {
        // The arc is narrower than the scan step: refine around the direction of x.
        let dir = x[1].atan2(x[0]);
        let (c, v) = golden_min(|p| -excess(p), dir - PI / 2.0, dir + PI / 2.0, 1e-14);
        if -v <= 0.0 {
            return Ok(0.0);
        }
        return Ok(arc_width(&excess, c));
    }
    Ok(arc_width(&excess, centre))
}

/// Width of the positive arc of f around a point where f > 0.
fn arc_width(f: &impl Fn(f64) -> f64, centre: f64) -> f64 {
    let edge = |sign: f64| {
        let mut inside = 0.0;
        let mut step = 1e-3;
        let mut outside = step;
        while f(centre + sign * outside) > 0.0 {
            inside = outside;
            step *= 2.0;
            outside = (outside + step).min(PI);
            if outside >= PI {
                break;
            }
        }
        for _ in 0..80 {
            let mid = 0.5 * (inside + outside);
            if f(centre + sign * mid) > 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    edge(1.0) + edge(-1.0)
}

/// Largest E0 with f(x) ≥ E0·min(√d, 1) over points at distances `ds` from K
/// along `n_dirs` outward directions; each point is placed at distance d from
/// K along the ray from the origin.
pub fn fit_visibility_constant(k: &ConvexHullK, ds: &[f64], n_dirs: usize) -> f64 {
    (0..n_dirs)
        .into_par_iter()
        .map(|i| {
            let phi = TAU * i as f64 / n_dirs as f64;
            let u = [phi.cos(), phi.sin()];
            let exit = ray_exit(k, u);
            ds.iter()
                .map(|&d| {
                    let p = point_at_distance(k, u, exit, d);
                    let f = visibility_measure(k, p).unwrap_or(0.0);
                    f / d.sqrt().min(1.0)
                })
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min)
}

const SHIPPED: [(&str, &str); 5] = [
    ("disc", include_str!("../shapes/disc.shape")),
    ("kite", include_str!("../shapes/kite.shape")),
    ("peanut", include_str!("../shapes/peanut.shape")),
    ("skew", include_str!("../shapes/skew.shape")),
    ("bumps", include_str!("../shapes/bumps.shape")),
];

/// The shape files bundled with the crate, by name.
pub fn shipped_shapes() -> Vec<(&'static str, StarBoundary)> {
    SHIPPED
        .iter()
        .map(|(name, text)| {
            (
                *name,
                StarBoundary::from_text(text).expect("bundled shape files parse"),
            )
        })
        .collect()
}

/// Hulls of every bundled shape and of every pair of them.
pub fn shipped_hulls(samples: usize) -> Vec<(String, ConvexHullK)> {
    let shapes = shipped_shapes();
    let mut out = Vec::new();
    for (i, (a, sa)) in shapes.iter().enumerate() {
        out.push((a.to_string(), convex_hull_union(sa, sa, samples)));
        for (b, sb) in &shapes[i + 1..] {
            out.push((format!("{a}+{b}"), convex_hull_union(sa, sb, samples)));
        }
    }
    out
}

/// Distance from x to the convex polygon K (zero inside).
pub fn distance_to_hull(k: &ConvexHullK, x: [f64; 2]) -> f64 {
    if k.contains(x) {
        return 0.0;
    }
    let v = k.vertices();
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            let ab = [b[0] - a[0], b[1] - a[1]];
            let len2 = ab[0] * ab[0] + ab[1] * ab[1];
            let t = if len2 > 0.0 {
                (((x[0] - a[0]) * ab[0] + (x[1] - a[1]) * ab[1]) / len2).clamp(0.0, 1.0)
            } else {
                0.0
            };
            dist(x, [a[0] + t * ab[0], a[1] + t * ab[1]])
        })
        .fold(f64::INFINITY, f64::min)
}

fn ray_exit(k: &ConvexHullK, u: [f64; 2]) -> f64 {
    let (mut lo, mut hi) = (0.0, 2.0 * k.radial_extent().1 + 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if k.contains([mid * u[0], mid * u[1]]) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Point on the ray along u at distance d from K.
fn point_at_distance(k: &ConvexHullK, u: [f64; 2], exit: f64, d: f64) -> [f64; 2] {
    let (mut lo, mut hi) = (exit, exit + d * 2.0 + 1.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if distance_to_hull(k, [mid * u[0], mid * u[1]]) < d {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    [hi * u[0], hi * u[1]]
}
