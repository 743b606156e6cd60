//! Branch speeds v_h^{+-}(u) and singular-endpoint quadrature: transit
//! times, periods, compacton support lengths, and the finite-time
//! convergence predicate.
//!
//! Endpoint square-root singularities are removed exactly by algebraic
//! substitution (u = m - s^2 at a simple turning point, u = s^2 at a
//! zero-slope contact with the singular line), with the vanishing factor
//! divided out by synthetic division so the regularized integrand is
//! analytic and free of cancellation. Adaptive 15-point Gauss-Kronrod
//! bisection then converges fast.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::potential::Potential;
use crate::tol::{MAX_PANELS, QUAD_TOL, TOL_ENERGY, TOL_ROOT};

/// Branch sign: the level curve {H = h} splits into two symmetric graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// The level polynomial F - h in factored form: every real root divided out
/// by synthetic division, so h - F(u) can be evaluated as a product with no
/// cancellation near the roots (which is exactly where the transit
/// integrands live).
#[derive(Debug, Clone)]
struct LevelFactors {
    /// Real roots with multiplicities; a root within rounding of zero is
    /// snapped to exactly 0.
    roots: Vec<(f64, u32)>,
    /// The root-free cofactor: F - h = rest * prod (u - r_i)^{m_i}.
    rest: Poly,
}

impl LevelFactors {
    fn new(pot: &Potential, h: f64) -> Self {
        let p = pot.poly().sub_const(h);
        let bound = p.cauchy_root_bound();
        let mut roots = Vec::new();
        let mut rest = p.clone();
        if let Ok(rs) = p.real_roots_in(-bound, bound, TOL_ROOT) {
            for mut r in rs {
                if r.abs() <= 1e-12 * bound.max(1.0)
                    && p.eval(0.0).abs() <= TOL_ROOT * p.scale_at(0.0)
                {
                    r = 0.0;
                }
                let m = p.root_multiplicity(r, 1e-9) as u32;
                for _ in 0..m {
                    rest = rest.deflate_at(r);
                }
                roots.push((r, m));
            }
        }
        LevelFactors { roots, rest }
    }

    /// h - F(u), stable at the roots.
    fn gap(&self, u: f64) -> f64 {
        let mut acc = -self.rest.eval(u);
        for &(r, m) in &self.roots {
            for _ in 0..m {
                acc *= u - r;
            }
        }
        acc
    }

    /// h - F(u) with `strip` powers of (u - r0) removed:
    /// gap(u) = (u - r0)^strip * gap_stripped(u, r0, strip).
    fn gap_stripped(&self, u: f64, r0: f64, strip: u32) -> f64 {
        let mut acc = -self.rest.eval(u);
        for &(r, m) in &self.roots {
            let mm = if r == r0 { m.saturating_sub(strip) } else { m };
            for _ in 0..mm {
                acc *= u - r;
            }
        }
        acc
    }

    /// The root coinciding with `u`, if any. Distance-based: near a double
    /// root the level value |F(u) - h| underflows the tolerance at points
    /// that are emphatically not the root (tail truncation points live
    /// 1e-8 away), so value proximity alone must not match.
    fn root_at(&self, u: f64) -> Option<(f64, u32)> {
        self.roots
            .iter()
            .copied()
            .min_by(|a, b| (a.0 - u).abs().partial_cmp(&(b.0 - u).abs()).unwrap())
            .filter(|(r, _)| (r - u).abs() <= 1e-12 * u.abs().max(1.0))
    }

    fn zero_root(&self) -> Option<u32> {
        self.roots.iter().find(|(r, _)| *r == 0.0).map(|(_, m)| *m)
    }
}

/// One signed branch v_h(u) = sign * sqrt(2 (h - F(u)) / u).
///
/// The level set F - h is kept in factored form; the quotient
/// (h - F(u)) / u is never formed by naive division near u = 0, where
/// cancellation would destroy it.
#[derive(Debug, Clone)]
pub struct SpeedBranch {
    pot: Potential,
    h: f64,
    sign: Sign,
    deflated: Option<Poly>,
    factors: LevelFactors,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpeedError {
    /// h - F(u) is negative beyond tolerance: u lies outside the branch.
    OutsideBranch { u: f64, deficit: f64 },
    /// u = 0 with h > h0: the branch is unbounded in v near the singular
    /// line.
    InfiniteSlope,
    /// u = 0 with h < h0: no branch exists there.
    Undefined,
}

impl SpeedBranch {
    pub fn new(pot: &Potential, h: f64, sign: Sign) -> Self {
        let deflated = if pot.is_h0(h) {
            // (h - F(u)) / u: negate F - h and drop the (numerically zero)
            // constant term.
            Some(pot.poly().sub_const(h).deflate_zero().scale(-1.0))
        } else {
            None
        };
        SpeedBranch {
            pot: pot.clone(),
            h,
            sign,
            deflated,
            factors: LevelFactors::new(pot, h),
        }
    }

    pub fn potential(&self) -> &Potential {
        &self.pot
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    pub fn deflated(&self) -> Option<&Poly> {
        self.deflated.as_ref()
    }

    /// (h - F(u)) / u without cancellation; defined for u > 0, and at u = 0
    /// only when h = h0 (the limit -F'(0)).
    fn quotient(&self, u: f64) -> f64 {
        if u == 0.0 {
            return self
                .deflated
                .as_ref()
                .map(|d| d.eval(0.0))
                .unwrap_or(f64::NAN);
        }
        match self.factors.zero_root() {
            Some(m0) => {
                // gap = u^m0 * stripped: the division by u is exact.
                let mut acc = self.factors.gap_stripped(u, 0.0, m0);
                for _ in 0..m0.saturating_sub(1) {
                    acc *= u;
                }
                acc
            }
            None => self.factors.gap(u) / u,
        }
    }

    /// Signed speed at u; at u = 0 with h = h0 returns the limit
    /// sign * sqrt(-2 F'(0)), never NaN.
    pub fn speed(&self, u: f64) -> std::result::Result<f64, SpeedError> {
        if u == 0.0 {
            return match &self.deflated {
                Some(d) => {
                    let g = d.eval(0.0);
                    if g < -TOL_ENERGY * self.pot.scale_at(0.0) {
                        Err(SpeedError::Undefined)
                    } else {
                        Ok(self.sign.factor() * (2.0 * g.max(0.0)).sqrt())
                    }
                }
                None => {
                    if self.h > self.pot.h0() {
                        Err(SpeedError::InfiniteSlope)
                    } else {
                        Err(SpeedError::Undefined)
                    }
                }
            };
        }
        if u < 0.0 {
            return Err(SpeedError::OutsideBranch { u, deficit: 0.0 });
        }
        let q = self.h - self.pot.eval(u, 0);
        if q < -TOL_ROOT * self.pot.scale_at(u) {
            return Err(SpeedError::OutsideBranch { u, deficit: -q });
        }
        let g = self.quotient(u);
        Ok(self.sign.factor() * (2.0 * g.max(0.0)).sqrt())
    }
}

/// A transit time, possibly infinite (critical endpoint reached only
/// asymptotically). Infinity is a first-class value, not an error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitResult {
    pub value: f64,
    pub converged: bool,
    pub estimated_error: f64,
}

impl TransitResult {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }
}

/// Which singular endpoint a convergence question refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Endpoint {
    /// Arrival at the singular line u = 0 on the level h = F(0).
    Zero,
    /// Arrival at a turning point u = m with F(m) = h.
    Turn(f64),
}

/// Convergence of the time-of-flight integral at a singular endpoint:
/// at zero the lowest n with F^(n)(0) != 0 must satisfy n <= 2; at a
/// turning point F'(m) must be strictly positive.
pub fn finite_time_convergent(f: &Potential, endpoint: Endpoint) -> bool {
    match endpoint {
        Endpoint::Zero => f.vanish_order_at_zero() <= 2,
        Endpoint::Turn(m) => f.eval(m, 1) > TOL_ENERGY * f.scale_at(m),
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
    pub panels: usize,
}

/// 15-point Gauss-Kronrod rule on [a, b]: returns (value, error estimate).
fn qk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    // Nodes and weights of the 7-point Gauss / 15-point Kronrod pair.
    const XGK: [f64; 8] = [
        0.991_455_371_120_812_6,
        0.949_107_912_342_758_5,
        0.864_864_423_359_769_1,
        0.741_531_185_599_394_5,
        0.586_087_235_467_691_1,
        0.405_845_151_377_397_2,
        0.207_784_955_007_898_48,
        0.0,
    ];
    const WGK: [f64; 8] = [
        0.022_935_322_010_529_224,
        0.063_092_092_629_978_56,
        0.104_790_010_322_250_19,
        0.140_653_259_715_525_92,
        0.169_004_726_639_267_9,
        0.190_350_578_064_785_42,
        0.204_432_940_075_298_89,
        0.209_482_141_084_727_82,
    ];
    const WG: [f64; 4] = [
        0.129_484_966_168_869_7,
        0.279_705_391_489_276_64,
        0.381_830_050_505_118_9,
        0.417_959_183_673_469_4,
    ];

    let c = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let fc = f(c);

    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    let mut resabs = kron.abs();
    let mut fv = [0.0f64; 14];

    #[allow(clippy::needless_range_loop)]
    for j in 0..3 {
        let idx = 2 * j + 1;
        let x = hl * XGK[idx];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv[idx] = f1;
        fv[7 + idx] = f2;
        gauss += WG[j] * (f1 + f2);
        kron += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let idx = 2 * j;
        let x = hl * XGK[idx];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv[idx] = f1;
        fv[7 + idx] = f2;
        kron += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }

    let mean = 0.5 * kron;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).abs() + (fv[7 + j] - mean).abs());
    }

    let value = kron * hl;
    let mut err = ((kron - gauss) * hl).abs();
    let resasc = resasc * hl.abs();
    let resabs = resabs * hl.abs();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * 1.0f64.min((200.0 * err / resasc).powf(1.5));
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

/// Globally adaptive bisection with the 15-point rule per panel.
pub fn adaptive_quad(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> QuadResult {
    if a == b {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            converged: true,
            panels: 0,
        };
    }

    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
    }

    let (v0, e0) = qk15(f, a, b);
    if !v0.is_finite() {
        return QuadResult {
            value: v0,
            error: f64::INFINITY,
            converged: false,
            panels: 1,
        };
    }
    let mut panels = vec![Panel {
        a,
        b,
        value: v0,
        error: e0,
    }];
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;

    loop {
        let total_value: f64 = frozen_value + panels.iter().map(|p| p.value).sum::<f64>();
        let total_error: f64 = frozen_error + panels.iter().map(|p| p.error).sum::<f64>();
        let target = tol * total_value.abs().max(1.0);
        if total_error <= target {
            return QuadResult {
                value: total_value,
                error: total_error,
                converged: true,
                panels: panels.len(),
            };
        }
        if panels.len() >= max_panels {
            return QuadResult {
                value: total_value,
                error: total_error,
                converged: false,
                panels: panels.len(),
            };
        }
        // Split the panel with the largest error估.
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap())
            .expect("panel list nonempty");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // Width underflow: accept as-is.
            frozen_value += p.value;
            frozen_error += p.error;
            continue;
        }
        for (lo, hi) in [(p.a, mid), (mid, p.b)] {
            let (v, e) = qk15(f, lo, hi);
            if !v.is_finite() {
                return QuadResult {
                    value: f64::NAN,
                    error: f64::INFINITY,
                    converged: false,
                    panels: panels.len(),
                };
            }
            panels.push(Panel {
                a: lo,
                b: hi,
                value: v,
                error: e,
            });
        }
    }
}

/// How one end of a transit integral is parametrized.
#[derive(Debug, Clone, Copy)]
enum EndTreatment {
    /// Integrand regular up to the endpoint; plain u-parametrization.
    Plain,
    /// u = s^2 at the (double) zero contact: the doubly stripped level
    /// factor is smooth and positive.
    SqrtZero,
    /// u = r -+ s^2 at a simple turning root; carries the exact root.
    Turn(f64),
    /// Critical endpoint: the transit diverges.
    Infinite,
}

fn classify_lower_end(b: &SpeedBranch, u_a: f64) -> Result<EndTreatment> {
    let pot = &b.pot;
    if u_a == 0.0 || u_a.abs() <= 1e-14 {
        return match &b.deflated {
            Some(d) => match pot.vanish_order_at_zero() {
                1 => {
                    if d.eval(0.0) <= 0.0 {
                        Err(Error::Domain(
                            "branch does not extend to u = 0 (F'(0) > 0)".into(),
                        ))
                    } else {
                        Ok(EndTreatment::Plain)
                    }
                }
                2 => Ok(EndTreatment::SqrtZero),
                _ => Ok(EndTreatment::Infinite),
            },
            None => {
                if b.h > pot.h0() {
                    Ok(EndTreatment::Plain)
                } else {
                    Err(Error::Domain("no branch at u = 0 for h below F(0)".into()))
                }
            }
        };
    }
    classify_turning_end(b, u_a, "lower")
}

fn classify_upper_end(b: &SpeedBranch, u_b: f64) -> Result<EndTreatment> {
    classify_turning_end(b, u_b, "upper")
}

fn classify_turning_end(b: &SpeedBranch, u_e: f64, which: &str) -> Result<EndTreatment> {
    if let Some((root, mult)) = b.factors.root_at(u_e) {
        if mult >= 2 {
            return Ok(EndTreatment::Infinite);
        }
        return Ok(EndTreatment::Turn(root));
    }
    let p = b.pot.poly().sub_const(b.h);
    if p.eval(u_e) > TOL_ROOT * p.scale_at(u_e) {
        return Err(Error::Domain(format!(
            "{which} endpoint {u_e} lies outside the branch (F > h)"
        )));
    }
    Ok(EndTreatment::Plain)
}

/// Transit time integral(u_a..u_b) du / |v| along a branch, with endpoint
/// singularities removed analytically. Returns an infinite value (converged)
/// when an included endpoint is of critical type.
pub fn transit_time(b: &SpeedBranch, u_a: f64, u_b: f64, tol: f64) -> Result<TransitResult> {
    // NaN-aware: anything but a strict ordering is rejected.
    if u_a.partial_cmp(&u_b) != Some(std::cmp::Ordering::Less) {
        return Err(Error::Domain(format!(
            "transit requires u_a < u_b, got [{u_a}, {u_b}]"
        )));
    }
    let lower = classify_lower_end(b, u_a)?;
    let upper = classify_upper_end(b, u_b)?;
    if matches!(lower, EndTreatment::Infinite) || matches!(upper, EndTreatment::Infinite) {
        return Ok(TransitResult {
            value: f64::INFINITY,
            converged: true,
            estimated_error: 0.0,
        });
    }

    // Each substituted integrand is valid on the whole branch interior, so
    // a split is only needed when both ends require their own substitution.
    let mut total = 0.0;
    let mut err = 0.0;
    let mut ok = true;

    let mut run = |piece: Piece, lo: f64, hi: f64, piece_tol: f64| {
        let r = integrate_piece(b, &piece, lo, hi, piece_tol);
        total += r.value;
        err += r.error;
        ok &= r.converged;
    };

    match (lower, upper) {
        (EndTreatment::Plain, EndTreatment::Plain) => {
            run(Piece::Plain, u_a, u_b, tol);
        }
        (lo_t, EndTreatment::Plain) => {
            run(piece_for_lower(lo_t, u_a), u_a, u_b, tol);
        }
        (EndTreatment::Plain, EndTreatment::Turn(r)) => {
            run(Piece::UpperTurn(r), u_a, u_b, tol);
        }
        (lo_t, EndTreatment::Turn(r)) => {
            let mid = 0.5 * (u_a + u_b);
            run(piece_for_lower(lo_t, u_a), u_a, mid, tol * 0.5);
            run(Piece::UpperTurn(r), mid, u_b, tol * 0.5);
        }
        _ => unreachable!("infinite ends handled above"),
    }

    Ok(TransitResult {
        value: total,
        converged: ok && total.is_finite(),
        estimated_error: err,
    })
}

#[derive(Debug, Clone, Copy)]
enum Piece {
    Plain,
    SqrtZero,
    LowerTurn(f64),
    UpperTurn(f64),
}

fn piece_for_lower(t: EndTreatment, _u_a: f64) -> Piece {
    match t {
        EndTreatment::Plain => Piece::Plain,
        EndTreatment::SqrtZero => Piece::SqrtZero,
        EndTreatment::Turn(r) => Piece::LowerTurn(r),
        EndTreatment::Infinite => unreachable!(),
    }
}

fn integrate_piece(b: &SpeedBranch, piece: &Piece, lo: f64, hi: f64, tol: f64) -> QuadResult {
    let fac = &b.factors;
    match piece {
        // Plain inverse-speed integrand 1 / |v|, regular up to both ends.
        Piece::Plain => {
            let f = |u: f64| -> f64 {
                let g = b.quotient(u);
                if g <= 0.0 {
                    return f64::INFINITY;
                }
                1.0 / (2.0 * g).sqrt()
            };
            adaptive_quad(&f, lo, hi, tol, MAX_PANELS)
        }
        // u = s^2 at the double zero contact: (h - F)/u = u * g~(u) with
        // g~ the doubly stripped factor; dt = 2 ds / sqrt(2 g~(s^2)).
        Piece::SqrtZero => {
            let f = |s: f64| -> f64 {
                let g = fac.gap_stripped(s * s, 0.0, 2);
                if g <= 0.0 {
                    return f64::INFINITY;
                }
                2.0 / (2.0 * g).sqrt()
            };
            adaptive_quad(&f, 0.0, hi.sqrt(), tol, MAX_PANELS)
        }
        // u = r + s^2: h - F = s^2 * stripped(u), stripped > 0 inside;
        // dt = 2 sqrt(u / (2 stripped)) ds.
        Piece::LowerTurn(r) => {
            let f = |s: f64| -> f64 {
                let u = r + s * s;
                let g = fac.gap_stripped(u, *r, 1);
                if g <= 0.0 {
                    return f64::INFINITY;
                }
                2.0 * (u / (2.0 * g)).sqrt()
            };
            adaptive_quad(&f, 0.0, (hi - r).max(0.0).sqrt(), tol, MAX_PANELS)
        }
        // u = r - s^2: h - F = (r - u) * (-stripped(u)), -stripped > 0
        // inside; dt = 2 sqrt(u / (2 (-stripped))) ds.
        Piece::UpperTurn(r) => {
            let f = |s: f64| -> f64 {
                let u = r - s * s;
                let g = -fac.gap_stripped(u, *r, 1);
                if g <= 0.0 {
                    return f64::INFINITY;
                }
                2.0 * (u / (2.0 * g)).sqrt()
            };
            adaptive_quad(&f, 0.0, (r - lo).max(0.0).sqrt(), tol, MAX_PANELS)
        }
    }
}

/// Wave-period family of integrals, all of the form 2 * transit(0 -> m):
/// peaked and compact-support use the level h0 = F(0), cusped uses F(m).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeriodMode {
    Peaked,
    Cusped,
    CompactSupport,
}

pub fn period(f: &Potential, m: f64, mode: PeriodMode) -> Result<f64> {
    let h = match mode {
        PeriodMode::Peaked | PeriodMode::CompactSupport => f.h0(),
        PeriodMode::Cusped => f.eval(m, 0),
    };
    let b = SpeedBranch::new(f, h, Sign::Plus);
    let t = transit_time(&b, 0.0, m, QUAD_TOL)?;
    if !t.converged {
        return Err(Error::Quadrature {
            estimate: 2.0 * t.value,
            error: 2.0 * t.estimated_error,
        });
    }
    Ok(2.0 * t.value)
}
