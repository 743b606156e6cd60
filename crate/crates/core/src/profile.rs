//! Sampled wave profiles.
//!
//! Arcs are parametrized by the time-of-flight map t(u) (cumulative transit
//! quadrature on a Chebyshev-clustered u-grid) rather than by time-stepping
//! the ODE, which is singular at u = 0 and at turning points. Inversion
//! u(t) uses the monotone table for bracketing and a safeguarded Newton
//! iteration with the exact derivative dt/du = 1 / |v|. Profiles are the
//! glued singular waves built from these arcs: periodic peaked/cusped chains,
//! compactons extended by zero, composites, finite-decay fronts, plateaus,
//! and the smooth waves.
//!
//! Near cusps the uniform-in-t sampling is supplemented by samples placed
//! uniformly in sqrt(u), which represents the local u ~ |t - t_k|^(2/3)
//! behavior without infinite-slope rows.

use crate::classify::{classify_level, WaveClass, WaveTag};
use crate::error::{Error, Result};
use crate::potential::{BranchInterval, EndpointClass, IntervalKind, Potential, ZeroContact};
use crate::quad::{transit_time, Sign, SpeedBranch};
use crate::tol::{ARC_SAMPLES, TAIL_EPS};

/// Elementary-form kinds: smooth interior arcs A/B/C and the singular-line
/// contact arcs a1..c2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    A,
    B,
    C,
    A1,
    A2,
    B1,
    B2,
    C1,
    C2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlopeLimit {
    Finite(f64),
    Infinite,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointData {
    pub u: f64,
    /// One-sided |du/dt| limit of the wave at this end of the arc.
    pub slope: SlopeLimit,
    pub finite_time: bool,
}

/// Exponential-tail truncation report for half-infinite arcs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailReport {
    /// Arc time at which truncation happened.
    pub t_trunc: f64,
    /// |u - m| at truncation.
    pub u_trunc: f64,
    /// Decay rate lambda from a log-linear fit of |u - m| over the last
    /// stretch of samples.
    pub decay_rate: f64,
}

/// One monotone solution arc: strictly increasing u-grid together with the
/// cumulative transit times along the rising branch.
#[derive(Debug, Clone)]
pub struct ElementaryForm {
    pub kind: FormKind,
    us: Vec<f64>,
    ts: Vec<f64>,
    branch: SpeedBranch,
    pub lower: EndpointData,
    pub upper: EndpointData,
    pub lower_tail: Option<TailReport>,
    pub upper_tail: Option<TailReport>,
}

impl ElementaryForm {
    pub fn us(&self) -> &[f64] {
        &self.us
    }

    pub fn ts(&self) -> &[f64] {
        &self.ts
    }

    /// Time to traverse the (truncated) arc.
    pub fn duration(&self) -> f64 {
        *self.ts.last().expect("arc is nonempty")
    }

    pub fn u_span(&self) -> (f64, f64) {
        (self.us[0], *self.us.last().unwrap())
    }

    /// |v(u)| on the arc.
    pub fn abs_speed(&self, u: f64) -> f64 {
        self.branch.speed(u).map(f64::abs).unwrap_or(f64::INFINITY)
    }

    /// Arc time from the lower end to `u` (monotone in u).
    pub fn t_of_u(&self, u: f64) -> f64 {
        let (lo, hi) = self.u_span();
        if u <= lo {
            return 0.0;
        }
        if u >= hi {
            return self.duration();
        }
        let j = self.us.partition_point(|&x| x <= u) - 1;
        if self.us[j] == u {
            return self.ts[j];
        }
        let t = transit_time(&self.branch, self.us[j], u, 1e-13)
            .map(|r| r.value)
            .unwrap_or(0.0);
        self.ts[j] + t
    }

    /// Inverts the time-of-flight map: u such that t_of_u(u) = t, clamped to
    /// the arc. The bracketing cell comes from the table; a safeguarded
    /// Newton iteration with dt/du = 1/|v| polishes to ~1e-12 in t.
    pub fn u_of_t(&self, t: f64) -> f64 {
        let dur = self.duration();
        if t <= 0.0 {
            return self.us[0];
        }
        if t >= dur {
            return *self.us.last().unwrap();
        }
        let j = self.ts.partition_point(|&x| x <= t) - 1;
        let (t0, t1) = (self.ts[j], self.ts[j + 1]);
        let cell_start = self.us[j];
        let (mut lo, mut hi) = (self.us[j], self.us[j + 1]);
        let target = t - t0;
        let tol_t = 1e-13 * dur.max(1.0);

        // Secant initial guess inside the cell, then safeguarded Newton on
        // T(u) - target with T measured from the cell start.
        let mut u = lo + (hi - lo) * ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        for _ in 0..80 {
            let resid = transit_time(&self.branch, cell_start, u, 1e-13)
                .map(|q| q.value - target)
                .unwrap_or(f64::NAN);
            if !resid.is_finite() {
                break;
            }
            if resid.abs() <= tol_t {
                return u;
            }
            if resid > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let v = self.abs_speed(u);
            let next = u - resid * v;
            u = if v.is_finite() && next > lo && next < hi {
                next
            } else {
                0.5 * (lo + hi)
            };
            if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
                break;
            }
        }
        u
    }
}

/// Maps an interval diagnosis to the elementary-form kind it supports.
pub fn expected_kind(f: &Potential, h: f64, iv: &BranchInterval) -> Result<FormKind> {
    let right_critical = iv.right_diag.endpoint_class == EndpointClass::Critical;
    match iv.kind {
        IntervalKind::Interior => {
            let left_critical = iv.left_diag.endpoint_class == EndpointClass::Critical;
            Ok(match (left_critical, right_critical) {
                (false, false) => FormKind::A,
                (true, true) => FormKind::C,
                _ => FormKind::B,
            })
        }
        IntervalKind::FromZero => {
            if f.is_h0(h) {
                match f.vanish_order_at_zero() {
                    1 => Ok(if right_critical {
                        FormKind::A2
                    } else {
                        FormKind::A1
                    }),
                    2 => Ok(if right_critical {
                        FormKind::B2
                    } else {
                        FormKind::B1
                    }),
                    _ => Err(Error::KindMismatch(
                        "Lipschitz contact at u = 0 admits no singular elementary form".into(),
                    )),
                }
            } else {
                Ok(if right_critical {
                    FormKind::C2
                } else {
                    FormKind::C1
                })
            }
        }
    }
}

/// Builds an elementary form on a branch interval by cumulative transit
/// quadrature on a Chebyshev-clustered u-grid. Half-infinite arcs (critical
/// endpoints) are truncated where |u - m| < tail_eps, with the exponential
/// tail reported.
pub fn elementary_form(
    f: &Potential,
    h: f64,
    iv: &BranchInterval,
    kind: FormKind,
    n_samples: usize,
    tail_eps: f64,
) -> Result<ElementaryForm> {
    elementary_form_tol(f, h, iv, kind, n_samples, tail_eps, 1e-12)
}

#[allow(clippy::too_many_arguments)]
fn elementary_form_tol(
    f: &Potential,
    h: f64,
    iv: &BranchInterval,
    kind: FormKind,
    n_samples: usize,
    tail_eps: f64,
    quad_tol: f64,
) -> Result<ElementaryForm> {
    let expect = expected_kind(f, h, iv)?;
    if expect != kind {
        return Err(Error::KindMismatch(format!(
            "interval supports {expect:?}, requested {kind:?}"
        )));
    }
    let n = n_samples.max(16);

    let left_critical =
        iv.left_diag.endpoint_class == EndpointClass::Critical && iv.kind == IntervalKind::Interior;
    let right_critical = iv.right_diag.endpoint_class == EndpointClass::Critical;

    let span = iv.right_end - iv.left_end;
    let lo_eff = if left_critical {
        iv.left_end + tail_eps.min(0.25 * span)
    } else {
        iv.left_end
    };
    let hi_eff = if right_critical {
        iv.right_end - tail_eps.min(0.25 * span)
    } else {
        iv.right_end
    };
    if lo_eff.partial_cmp(&hi_eff) != Some(std::cmp::Ordering::Less) {
        return Err(Error::Domain("interval too narrow after tail trim".into()));
    }

    // Chebyshev clustering resolves the square-root behavior at both ends.
    let mut us = Vec::with_capacity(n);
    for j in 0..n {
        let theta = std::f64::consts::PI * j as f64 / (n - 1) as f64;
        us.push(lo_eff + (hi_eff - lo_eff) * 0.5 * (1.0 - theta.cos()));
    }
    us[0] = lo_eff;
    us[n - 1] = hi_eff;

    let branch = SpeedBranch::new(f, h, Sign::Plus);
    let mut ts = Vec::with_capacity(n);
    ts.push(0.0);
    for j in 1..n {
        let dt = transit_time(&branch, us[j - 1], us[j], quad_tol)?;
        // Cells grazing a trimmed critical endpoint integrate a near-1/x
        // profile where the absolute target is unreachable in doubles;
        // accept them on a relative error criterion instead.
        let acceptable = dt.converged || dt.estimated_error <= 1e-9 * dt.value.abs().max(1.0);
        if !acceptable || !dt.value.is_finite() {
            return Err(Error::Quadrature {
                estimate: dt.value,
                error: dt.estimated_error,
            });
        }
        ts.push(ts[j - 1] + dt.value);
    }

    let lower = endpoint_data(iv, &branch, true);
    let upper = endpoint_data(iv, &branch, false);
    let lower_tail = left_critical.then(|| fit_tail(&us, &ts, iv.left_end, true));
    let upper_tail = right_critical.then(|| fit_tail(&us, &ts, iv.right_end, false));

    Ok(ElementaryForm {
        kind,
        us,
        ts,
        branch,
        lower,
        upper,
        lower_tail,
        upper_tail,
    })
}

fn endpoint_data(iv: &BranchInterval, branch: &SpeedBranch, lower: bool) -> EndpointData {
    let diag = if lower { iv.left_diag } else { iv.right_diag };
    let slope = if lower && iv.kind == IntervalKind::FromZero {
        match diag.zero_contact {
            ZeroContact::FiniteSlope(a) => SlopeLimit::Finite(a),
            ZeroContact::ZeroSlope => SlopeLimit::Finite(0.0),
            ZeroContact::InfiniteSlope => SlopeLimit::Infinite,
            ZeroContact::None => {
                SlopeLimit::Finite(branch.speed(diag.at).map(f64::abs).unwrap_or(0.0))
            }
        }
    } else {
        // Turning points: |v| = 0 there (regular: momentary; critical:
        // asymptotic).
        SlopeLimit::Finite(0.0)
    };
    EndpointData {
        u: diag.at,
        slope,
        finite_time: diag.finite_time,
    }
}

/// Log-linear fit of |u - m| against t over the last stretch of the arc.
fn fit_tail(us: &[f64], ts: &[f64], m: f64, lower_end: bool) -> TailReport {
    let n = us.len();
    let k = (n / 4).max(8).min(n - 1);
    let idx: Vec<usize> = if lower_end {
        (1..=k).collect()
    } else {
        (n - 1 - k..n - 1).collect()
    };
    let mut sx = 0.0;
    let mut sy = 0.0;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut cnt = 0.0;
    for &i in &idx {
        let d = (us[i] - m).abs();
        if d <= 0.0 {
            continue;
        }
        let x = ts[i];
        let y = d.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        cnt += 1.0;
    }
    let denom = cnt * sxx - sx * sx;
    let slope = if denom.abs() > 0.0 {
        (cnt * sxy - sx * sy) / denom
    } else {
        0.0
    };
    // Approach toward the critical endpoint: on the arc's own clock the
    // distance shrinks toward the trimmed end.
    let rate = if lower_end { slope } else { -slope };
    let (t_tr, u_tr) = if lower_end {
        (ts[0], (us[0] - m).abs())
    } else {
        (*ts.last().unwrap(), (us[n - 1] - m).abs())
    };
    TailReport {
        t_trunc: t_tr,
        u_trunc: u_tr,
        decay_rate: rate,
    }
}

/// Kinds of singular profile points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingKind {
    /// Finite opposite one-sided slopes +-a.
    Peak(f64),
    /// One-sided slopes blowing up with opposite signs.
    Cusp,
    /// C1 contact with the zero state (compacton edge, front foot).
    C1Contact,
    /// Edge of an interior zero-stretch.
    PlateauEdge,
}

impl SingKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            SingKind::Peak(_) => "peak",
            SingKind::Cusp => "cusp",
            SingKind::C1Contact => "c1",
            SingKind::PlateauEdge => "plateau-edge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub u: f64,
    /// du/dt from the branch speed at the sampled u. At singular rows the
    /// derivative is undefined; those rows carry 0 by convention and are
    /// marked in `singular_set`.
    pub dudt: f64,
}

/// A piecewise-analytic sampled wave: base grid uniform in t per smooth
/// piece, plus sqrt(u)-uniform refinement bands flanking each cusp.
#[derive(Debug, Clone)]
pub struct WaveProfile {
    pub samples: Vec<Sample>,
    pub singular_set: Vec<(f64, SingKind)>,
    /// Time intervals owned by the sqrt(u)-uniform refinement bands; all
    /// quadrature over them must run in the sqrt(u) parametrization.
    pub bands: Vec<(f64, f64)>,
    pub meta: WaveClass,
    pub energy: f64,
    pub truncation: Option<TailReport>,
}

impl WaveProfile {
    pub fn t_min(&self) -> f64 {
        self.samples.first().map(|s| s.t).unwrap_or(0.0)
    }

    pub fn t_max(&self) -> f64 {
        self.samples.last().map(|s| s.t).unwrap_or(0.0)
    }

    /// Median positive sample spacing (robust against refinement bands).
    pub fn base_dt(&self) -> f64 {
        let mut d: Vec<f64> = self
            .samples
            .windows(2)
            .map(|w| w[1].t - w[0].t)
            .filter(|&x| x > 0.0)
            .collect();
        if d.is_empty() {
            return 0.0;
        }
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        d[d.len() / 2]
    }
}

/// Non-overlap placements for composite waves, in units of the support
/// length; `periodic` gives the period as a multiple (> 1) of the support.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositionSpec {
    pub placements: Vec<f64>,
    pub periodic: Option<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    /// Uniform samples per characteristic span (period, support, or tail
    /// window).
    pub samples_per_piece: usize,
    /// Points in each elementary form's time-of-flight table.
    pub arc_samples: usize,
    /// Truncation threshold |u - m| for half-infinite arcs.
    pub tail_eps: f64,
    /// Minimum points per cusp refinement band.
    pub band_samples: usize,
    /// Per-cell quadrature tolerance for the time-of-flight tables.
    pub quad_tol: f64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            samples_per_piece: 1024,
            arc_samples: ARC_SAMPLES,
            tail_eps: TAIL_EPS,
            band_samples: 96,
            quad_tol: 1e-12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrontDirection {
    Rising,
    Decaying,
}

// ---------------------------------------------------------------------------
// Assembly machinery
// ---------------------------------------------------------------------------

struct Assembler {
    samples: Vec<Sample>,
    singular: Vec<(f64, SingKind)>,
    /// Time ranges owned by cusp refinement bands; base-grid rows are not
    /// emitted there so each cusp zone stays uniform in sqrt(u).
    exclusions: Vec<(f64, f64)>,
    span_hint: f64,
}

impl Assembler {
    fn new(span_hint: f64) -> Self {
        Assembler {
            samples: Vec::new(),
            singular: Vec::new(),
            exclusions: Vec::new(),
            span_hint,
        }
    }

    fn mark(&mut self, t: f64, kind: SingKind) {
        self.singular.push((t, kind));
        self.samples.push(Sample {
            t,
            u: 0.0,
            dudt: 0.0,
        });
    }

    fn is_singular_t(&self, t: f64) -> bool {
        let eps = 1e-12 * self.span_hint.max(1.0);
        self.singular.iter().any(|&(tk, _)| (t - tk).abs() <= eps)
    }

    fn is_excluded(&self, t: f64) -> bool {
        self.exclusions.iter().any(|&(a, b)| t > a && t < b)
    }

    fn push(&mut self, t: f64, u: f64, dudt: f64) {
        if !self.is_singular_t(t) && !self.is_excluded(t) {
            self.samples.push(Sample { t, u, dudt });
        }
    }

    fn push_band(&mut self, t: f64, u: f64, dudt: f64) {
        if !self.is_singular_t(t) {
            self.samples.push(Sample { t, u, dudt });
        }
    }

    /// Zero-state stretch over [t0, t1] with n uniform rows including both
    /// endpoints.
    fn zero_piece(&mut self, t0: f64, t1: f64, n: usize) {
        let n = n.max(2);
        for i in 0..=n {
            let t = t0 + (t1 - t0) * i as f64 / n as f64;
            self.push(t, 0.0, 0.0);
        }
    }

    /// Arc piece over [t0, t0 + duration]: rising maps u(t) = arc(t - t0),
    /// falling mirrors it. n uniform rows per piece including endpoints.
    fn arc_piece(&mut self, form: &ElementaryForm, t0: f64, rising: bool, n: usize) {
        let n = if n.is_multiple_of(2) { n } else { n + 1 }.max(4);
        let dur = form.duration();
        for i in 0..=n {
            let t = t0 + dur * i as f64 / n as f64;
            let tau = if rising { t - t0 } else { t0 + dur - t };
            let u = form.u_of_t(tau);
            let v = form.abs_speed(u);
            let sign = if rising { 1.0 } else { -1.0 };
            let dudt = if v.is_finite() { sign * v } else { 0.0 };
            self.push(t, u, dudt);
        }
    }

    /// sqrt(u)-uniform refinement band next to a cusp at t_k, replacing the
    /// base grid on its time range. `side` +1 places samples at t_k + t(u),
    /// -1 mirrors to the left.
    fn cusp_band(&mut self, form: &ElementaryForm, t_k: f64, side: f64, u_cut: f64, n: usize) {
        let s_cut = u_cut.max(0.0).sqrt();
        if s_cut <= 0.0 {
            return;
        }
        let t_cut = form.t_of_u(u_cut);
        self.exclusions.push(if side > 0.0 {
            (t_k, t_k + t_cut)
        } else {
            (t_k - t_cut, t_k)
        });
        for i in 1..=n {
            let s = s_cut * i as f64 / n as f64;
            let u = s * s;
            let t = t_k + side * form.t_of_u(u);
            let v = form.abs_speed(u);
            // Moving away from the cusp on the right means u rising; on the
            // left u falls toward the cusp, i.e. dudt = -|v| at mirrored t.
            let dudt = if v.is_finite() { side * v } else { 0.0 };
            self.push_band(t, u, dudt);
        }
    }

    fn finish(
        mut self,
        meta: WaveClass,
        energy: f64,
        truncation: Option<TailReport>,
    ) -> WaveProfile {
        self.samples.sort_by(|a, b| a.t.partial_cmp(&b.t).unwrap());
        let eps = 1e-13 * self.span_hint.max(1.0);
        self.samples.dedup_by(|a, b| (a.t - b.t).abs() <= eps);
        self.singular.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        self.singular.dedup_by(|a, b| (a.0 - b.0).abs() <= eps);
        self.exclusions
            .sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        WaveProfile {
            samples: self.samples,
            singular_set: self.singular,
            bands: self.exclusions,
            meta,
            energy,
            truncation,
        }
    }
}

fn find_class(f: &Potential, h: f64, tag: WaveTag) -> Result<WaveClass> {
    classify_level(f, h)
        .into_iter()
        .find(|c| c.tag == tag)
        .ok_or_else(|| {
            Error::KindMismatch(format!(
                "classification of the level h = {h} does not admit {}",
                tag.as_str()
            ))
        })
}

/// Band extent and point count next to a cusp. The band reaches out to
/// min(64 base spacings, a quarter of the arc), far enough that the
/// time-grid integrand derivatives are tame at the junction; the point
/// count keeps the band's top time-spacing at or below the base grid
/// (both through the power-law estimate and the actual top speed).
fn band_geometry(form: &ElementaryForm, dt: f64, min_samples: usize) -> (f64, usize) {
    let t_cut = (64.0 * dt).min(0.25 * form.duration());
    let u_cut = form.u_of_t(t_cut);
    let mut n = min_samples.max((3.0 * t_cut / dt).ceil() as usize);
    let v_top = form.abs_speed(u_cut);
    if v_top.is_finite() && v_top > 0.0 {
        n = n.max((2.0 * u_cut / (v_top * dt)).ceil() as usize);
    }
    (u_cut, n)
}

/// Base time step for arcs with a truncated exponential tail: resolve the
/// core of the wave (where u covers most of its range), not the long flat
/// tail window.
fn core_dt(form: &ElementaryForm, samples: usize) -> f64 {
    let (lo, hi) = form.u_span();
    let t_core = form
        .t_of_u(lo + 0.95 * (hi - lo))
        .max(1e-3 * form.duration());
    2.0 * t_core / samples.max(16) as f64
}

// ---------------------------------------------------------------------------
// Builders
// ---------------------------------------------------------------------------

/// Periodic extension of the a1 arc: peaks (u = 0, slopes -+a) at t_k = k T,
/// one maximum per period, two periods sampled.
pub fn build_peaked_periodic(f: &Potential, opts: &BuildOptions) -> Result<WaveProfile> {
    let meta = find_class(f, f.h0(), WaveTag::PeakedPeriodic)?;
    let a = meta.attributes.peak_slope.unwrap_or(0.0);
    let form = elementary_form_tol(
        f,
        f.h0(),
        &meta.interval,
        FormKind::A1,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let half = form.duration();
    let period = 2.0 * half;
    let n_half = (opts.samples_per_piece / 2).max(8);

    let mut asm = Assembler::new(2.0 * period);
    for k in 0..=2 {
        asm.mark(k as f64 * period, SingKind::Peak(a));
    }
    for k in 0..2 {
        let t0 = k as f64 * period;
        asm.arc_piece(&form, t0, true, n_half);
        asm.arc_piece(&form, t0 + half, false, n_half);
    }
    Ok(asm.finish(meta, f.h0(), None))
}

/// Downward peak at t = 0 glued from the a2 pair; u -> m exponentially on
/// both sides.
pub fn build_peaked_solitary(f: &Potential, opts: &BuildOptions) -> Result<WaveProfile> {
    let meta = find_class(f, f.h0(), WaveTag::PeakedSolitary)?;
    let a = meta.attributes.peak_slope.unwrap_or(0.0);
    let form = elementary_form_tol(
        f,
        f.h0(),
        &meta.interval,
        FormKind::A2,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let t_tr = form.duration();
    let n = ((t_tr / core_dt(&form, opts.samples_per_piece)).ceil() as usize).max(16);

    let mut asm = Assembler::new(2.0 * t_tr);
    asm.mark(0.0, SingKind::Peak(a));
    asm.arc_piece(&form, -t_tr, false, n);
    asm.arc_piece(&form, 0.0, true, n);
    Ok(asm.finish(meta, f.h0(), form.upper_tail))
}

/// b1 arc extended by the zero solution outside its support; C1 at the
/// edges.
pub fn build_compacton(f: &Potential, opts: &BuildOptions) -> Result<WaveProfile> {
    let meta = find_class(f, f.h0(), WaveTag::Compacton)?;
    debug_assert!(crate::classify::zero_solution_admissible(f, f.h0()));
    let form = elementary_form_tol(
        f,
        f.h0(),
        &meta.interval,
        FormKind::B1,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let half = form.duration();
    let support = 2.0 * half;
    let n_half = (opts.samples_per_piece / 2).max(8);
    let n_margin = (opts.samples_per_piece / 2).max(8);

    let mut asm = Assembler::new(2.0 * support);
    asm.mark(0.0, SingKind::C1Contact);
    asm.mark(support, SingKind::C1Contact);
    asm.zero_piece(-0.5 * support, 0.0, n_margin);
    asm.arc_piece(&form, 0.0, true, n_half);
    asm.arc_piece(&form, half, false, n_half);
    asm.zero_piece(support, 1.5 * support, n_margin);
    Ok(asm.finish(meta, f.h0(), None))
}

/// Copies of the compacton at offsets a_k (units of support), zero
/// elsewhere; periodic mode places one copy per period.
pub fn build_composite(
    f: &Potential,
    spec: &CompositionSpec,
    opts: &BuildOptions,
) -> Result<WaveProfile> {
    let mut meta = find_class(f, f.h0(), WaveTag::CompositeAdmissible)?;
    debug_assert!(crate::classify::zero_solution_admissible(f, f.h0()));
    let form = elementary_form_tol(
        f,
        f.h0(),
        &meta.interval,
        FormKind::B1,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let half = form.duration();
    let support = 2.0 * half;

    let mut placements: Vec<f64> = if let Some(mult) = spec.periodic {
        if mult <= 1.0 {
            return Err(Error::Config(format!(
                "periodic multiple must exceed 1, got {mult}"
            )));
        }
        meta.attributes.period = Some(mult * support);
        vec![0.0, mult]
    } else {
        spec.placements.clone()
    };
    if placements.is_empty() {
        return Err(Error::Config(
            "composite needs at least one placement".into(),
        ));
    }
    placements.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for w in placements.windows(2) {
        if w[1] - w[0] < 1.0 - 1e-12 {
            return Err(Error::OverlappingSupports(w[0], w[1]));
        }
    }

    let n_half = (opts.samples_per_piece / 2).max(8);
    let t_lo = placements[0] * support - 0.5 * support;
    let t_hi = (placements[placements.len() - 1] + 1.0) * support + 0.5 * support;
    let mut asm = Assembler::new(t_hi - t_lo);

    for &a_k in &placements {
        let start = a_k * support;
        asm.mark(start, SingKind::C1Contact);
        asm.mark(start + support, SingKind::C1Contact);
    }
    let mut cursor = t_lo;
    for &a_k in &placements {
        let start = a_k * support;
        if start > cursor {
            let n_gap = ((start - cursor) / support * opts.samples_per_piece as f64) as usize;
            asm.zero_piece(cursor, start, n_gap.max(8));
        }
        asm.arc_piece(&form, start, true, n_half);
        asm.arc_piece(&form, start + half, false, n_half);
        cursor = start + support;
    }
    if t_hi > cursor {
        let n_gap = ((t_hi - cursor) / support * opts.samples_per_piece as f64) as usize;
        asm.zero_piece(cursor, t_hi, n_gap.max(8));
    }
    Ok(asm.finish(meta, f.h0(), None))
}

/// Finite-time decay front from the b2 arc: identically zero on one side of
/// the foot, monotone approach to m on the other.
pub fn build_front(
    f: &Potential,
    direction: FrontDirection,
    opts: &BuildOptions,
) -> Result<WaveProfile> {
    let meta = find_class(f, f.h0(), WaveTag::FrontFiniteDecay)?;
    debug_assert!(crate::classify::zero_solution_admissible(f, f.h0()));
    let form = elementary_form_tol(
        f,
        f.h0(),
        &meta.interval,
        FormKind::B2,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let t_tr = form.duration();
    let n = ((t_tr / core_dt(&form, opts.samples_per_piece)).ceil() as usize).max(16);
    let n_margin = (n / 2).max(8);

    let mut asm = Assembler::new(1.5 * t_tr);
    asm.mark(0.0, SingKind::C1Contact);
    match direction {
        FrontDirection::Rising => {
            asm.zero_piece(-0.5 * t_tr, 0.0, n_margin);
            asm.arc_piece(&form, 0.0, true, n);
        }
        FrontDirection::Decaying => {
            asm.arc_piece(&form, -t_tr, false, n);
            asm.zero_piece(0.0, 0.5 * t_tr, n_margin);
        }
    }
    Ok(asm.finish(meta, f.h0(), form.upper_tail))
}

/// Plateau of the zero state of length `gap` between two b2 tails; gap = 0
/// reproduces the analytic solitary wave (no singular points).
pub fn build_plateau(f: &Potential, gap: f64, opts: &BuildOptions) -> Result<WaveProfile> {
    if gap < 0.0 {
        return Err(Error::Config(format!(
            "plateau gap must be >= 0, got {gap}"
        )));
    }
    let tag = if gap > 0.0 {
        WaveTag::Plateau
    } else {
        WaveTag::SmoothSolitaryMin
    };
    let meta = find_class(f, f.h0(), tag)?;
    debug_assert!(crate::classify::zero_solution_admissible(f, f.h0()));
    let form = elementary_form_tol(
        f,
        f.h0(),
        &meta.interval,
        FormKind::B2,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let t_tr = form.duration();
    let n = ((t_tr / core_dt(&form, opts.samples_per_piece)).ceil() as usize).max(16);

    let mut asm = Assembler::new(2.0 * t_tr + gap);
    if gap > 0.0 {
        asm.mark(0.0, SingKind::PlateauEdge);
        asm.mark(gap, SingKind::PlateauEdge);
    }
    asm.arc_piece(&form, -t_tr, false, n);
    if gap > 0.0 {
        let n_gap = ((gap / t_tr.max(gap)) * n as f64) as usize;
        asm.zero_piece(0.0, gap, n_gap.max(8));
    }
    asm.arc_piece(&form, gap, true, n);
    Ok(asm.finish(meta, f.h0(), form.upper_tail))
}

/// c1 arcs chained with period T; cusps at t_k with u ~ |t - t_k|^(2/3)
/// locally, refined in sqrt(u) on both sides.
pub fn build_cusped_periodic(f: &Potential, h: f64, opts: &BuildOptions) -> Result<WaveProfile> {
    let meta = find_class(f, h, WaveTag::CuspedPeriodic)?;
    let form = elementary_form_tol(
        f,
        h,
        &meta.interval,
        FormKind::C1,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let half = form.duration();
    let period = 2.0 * half;
    let n_half = (opts.samples_per_piece / 2).max(8);
    let dt = period / opts.samples_per_piece as f64;
    let (u_cut, n_band) = band_geometry(&form, dt, opts.band_samples);

    let mut asm = Assembler::new(2.0 * period);
    for k in 0..=2 {
        asm.mark(k as f64 * period, SingKind::Cusp);
    }
    // Refinement bands first: they own the time ranges next to the cusps.
    asm.cusp_band(&form, 0.0, 1.0, u_cut, n_band);
    asm.cusp_band(&form, period, -1.0, u_cut, n_band);
    asm.cusp_band(&form, period, 1.0, u_cut, n_band);
    asm.cusp_band(&form, 2.0 * period, -1.0, u_cut, n_band);
    for k in 0..2 {
        let t0 = k as f64 * period;
        asm.arc_piece(&form, t0, true, n_half);
        asm.arc_piece(&form, t0 + half, false, n_half);
    }
    Ok(asm.finish(meta, h, None))
}

/// c2 pair glued at t = 0: cusp down to u = 0, exponential approach to m on
/// both sides.
pub fn build_cusped_solitary(f: &Potential, h: f64, opts: &BuildOptions) -> Result<WaveProfile> {
    let meta = find_class(f, h, WaveTag::CuspedSolitary)?;
    let form = elementary_form_tol(
        f,
        h,
        &meta.interval,
        FormKind::C2,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let t_tr = form.duration();
    let dt = core_dt(&form, opts.samples_per_piece);
    let n = ((t_tr / dt).ceil() as usize).max(16);
    let (u_cut, n_band) = band_geometry(&form, dt, opts.band_samples);

    let mut asm = Assembler::new(2.0 * t_tr);
    asm.mark(0.0, SingKind::Cusp);
    asm.cusp_band(&form, 0.0, 1.0, u_cut, n_band);
    asm.cusp_band(&form, 0.0, -1.0, u_cut, n_band);
    asm.arc_piece(&form, -t_tr, false, n);
    asm.arc_piece(&form, 0.0, true, n);
    Ok(asm.finish(meta, h, form.upper_tail))
}

/// Smooth periodic wave from an interior interval (two regular turning
/// points), two periods sampled, trough at t = 0.
pub fn build_smooth_periodic(f: &Potential, h: f64, opts: &BuildOptions) -> Result<WaveProfile> {
    let meta = find_class(f, h, WaveTag::SmoothPeriodic)?;
    let form = elementary_form_tol(
        f,
        h,
        &meta.interval,
        FormKind::A,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let half = form.duration();
    let period = 2.0 * half;
    let n_half = (opts.samples_per_piece / 2).max(8);

    let mut asm = Assembler::new(2.0 * period);
    for k in 0..2 {
        let t0 = k as f64 * period;
        asm.arc_piece(&form, t0, true, n_half);
        asm.arc_piece(&form, t0 + half, false, n_half);
    }
    Ok(asm.finish(meta, h, None))
}

/// Smooth solitary wave from an interior interval with exactly one critical
/// endpoint; extremum at t = 0.
pub fn build_smooth_solitary(f: &Potential, h: f64, opts: &BuildOptions) -> Result<WaveProfile> {
    let classes = classify_level(f, h);
    let meta = classes
        .into_iter()
        .find(|c| {
            matches!(
                c.tag,
                WaveTag::SmoothSolitaryMax | WaveTag::SmoothSolitaryMin
            ) && c.interval.kind == IntervalKind::Interior
        })
        .ok_or_else(|| Error::KindMismatch("level admits no smooth solitary wave".into()))?;
    let form = elementary_form_tol(
        f,
        h,
        &meta.interval,
        FormKind::B,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let t_tr = form.duration();
    let n = ((t_tr / core_dt(&form, opts.samples_per_piece)).ceil() as usize).max(16);

    // Max variant: asymptote below, crest reached at t = 0 (arc rises into
    // the crest). Min variant mirrors.
    let mut asm = Assembler::new(2.0 * t_tr);
    match meta.tag {
        WaveTag::SmoothSolitaryMax => {
            asm.arc_piece(&form, -t_tr, true, n);
            asm.arc_piece(&form, 0.0, false, n);
        }
        _ => {
            asm.arc_piece(&form, -t_tr, false, n);
            asm.arc_piece(&form, 0.0, true, n);
        }
    }
    let tail = form.lower_tail.or(form.upper_tail);
    Ok(asm.finish(meta, h, tail))
}

/// Smooth front from an interior interval with two critical endpoints.
pub fn build_smooth_front(
    f: &Potential,
    h: f64,
    direction: FrontDirection,
    opts: &BuildOptions,
) -> Result<WaveProfile> {
    let meta = find_class(f, h, WaveTag::SmoothFront)?;
    let form = elementary_form_tol(
        f,
        h,
        &meta.interval,
        FormKind::C,
        opts.arc_samples,
        opts.tail_eps,
        opts.quad_tol,
    )?;
    let dur = form.duration();
    let n = opts.samples_per_piece.max(16);

    let mut asm = Assembler::new(dur);
    let rising = direction == FrontDirection::Rising;
    asm.arc_piece(&form, -0.5 * dur, rising, n);
    Ok(asm.finish(meta, h, form.upper_tail))
}

/// Constant solution u == p at a critical point with F(p) = h.
pub fn build_constant(f: &Potential, h: f64, opts: &BuildOptions) -> Result<WaveProfile> {
    let meta = find_class(f, h, WaveTag::Constant)?;
    let p = meta.attributes.crest.unwrap_or(0.0);
    let n = opts.samples_per_piece.max(16);
    let mut asm = Assembler::new(10.0);
    for i in 0..=n {
        let t = -5.0 + 10.0 * i as f64 / n as f64;
        asm.push(t, p, 0.0);
    }
    Ok(asm.finish(meta, h, None))
}

/// Builds the concrete profile for a classify-admitted wave class.
pub fn build_profile(
    f: &Potential,
    h: f64,
    class: &WaveClass,
    opts: &BuildOptions,
) -> Result<WaveProfile> {
    match class.tag {
        WaveTag::PeakedPeriodic => build_peaked_periodic(f, opts),
        WaveTag::PeakedSolitary => build_peaked_solitary(f, opts),
        WaveTag::Compacton => build_compacton(f, opts),
        WaveTag::CompositeAdmissible => build_composite(
            f,
            &CompositionSpec {
                placements: vec![0.0, 2.0],
                periodic: None,
            },
            opts,
        ),
        WaveTag::FrontFiniteDecay => build_front(f, FrontDirection::Rising, opts),
        WaveTag::Plateau => build_plateau(f, 1.0, opts),
        WaveTag::CuspedPeriodic => build_cusped_periodic(f, h, opts),
        WaveTag::CuspedSolitary => build_cusped_solitary(f, h, opts),
        WaveTag::SmoothPeriodic => build_smooth_periodic(f, h, opts),
        WaveTag::SmoothSolitaryMax => build_smooth_solitary(f, h, opts),
        WaveTag::SmoothSolitaryMin => {
            if class.interval.kind == IntervalKind::FromZero {
                build_plateau(f, 0.0, opts)
            } else {
                build_smooth_solitary(f, h, opts)
            }
        }
        WaveTag::SmoothFront => build_smooth_front(f, h, FrontDirection::Rising, opts),
        WaveTag::Constant => build_constant(f, h, opts),
        WaveTag::NoneSingular => Err(Error::KindMismatch(
            "none-singular is a negative result; no profile exists".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pot(coeffs: &[f64]) -> Potential {
        Potential::new(coeffs.to_vec()).unwrap()
    }

    const SQRT2: f64 = std::f64::consts::SQRT_2;
    const PI: f64 = std::f64::consts::PI;

    fn from_zero_interval(f: &Potential, h: f64) -> BranchInterval {
        f.admissible_intervals(h, f.default_u_max(h))
            .unwrap()
            .into_iter()
            .find(|iv| iv.kind == IntervalKind::FromZero)
            .unwrap()
    }

    #[test]
    fn a1_arc_matches_parabola() {
        // F = u^2 - u, h = 0: rising arc is u(t) = 1 - (t - sqrt(2))^2 / 2.
        let f = pot(&[0.0, -1.0, 1.0]);
        let iv = from_zero_interval(&f, 0.0);
        let form = elementary_form(&f, 0.0, &iv, FormKind::A1, 512, 1e-8).unwrap();
        assert!((form.duration() - SQRT2).abs() < 1e-10);
        let mut worst = 0.0f64;
        for i in 0..=200 {
            let t = form.duration() * i as f64 / 200.0;
            let exact = 1.0 - (t - SQRT2) * (t - SQRT2) / 2.0;
            worst = worst.max((form.u_of_t(t) - exact).abs());
        }
        assert!(worst <= 1e-8, "parabola arc error {worst}");
    }

    #[test]
    fn b1_arc_matches_sine_squared() {
        // F = u^3 - u^2: u(t) = sin^2(t / sqrt(2)) on the rising half.
        let f = pot(&[0.0, 0.0, -1.0, 1.0]);
        let iv = from_zero_interval(&f, 0.0);
        let form = elementary_form(&f, 0.0, &iv, FormKind::B1, 512, 1e-8).unwrap();
        assert!((form.duration() - PI * SQRT2 / 2.0).abs() < 1e-10);
        let mut worst = 0.0f64;
        for i in 0..=200 {
            let t = form.duration() * i as f64 / 200.0;
            let exact = (t / SQRT2).sin().powi(2);
            worst = worst.max((form.u_of_t(t) - exact).abs());
        }
        assert!(worst <= 1e-8, "sin^2 arc error {worst}");
    }

    #[test]
    fn b2_arc_matches_tanh_squared() {
        // F = -u^2 (u-1)^2: u(t) = tanh^2(t / sqrt(2)).
        let f = pot(&[0.0, 0.0, -1.0, 2.0, -1.0]);
        let iv = from_zero_interval(&f, 0.0);
        let form = elementary_form(&f, 0.0, &iv, FormKind::B2, 512, 1e-8).unwrap();
        let mut worst = 0.0f64;
        for i in 0..=200 {
            let t = form.duration() * i as f64 / 200.0;
            let exact = (t / SQRT2).tanh().powi(2);
            worst = worst.max((form.u_of_t(t) - exact).abs());
        }
        assert!(worst <= 1e-8, "tanh^2 arc error {worst}");
        // Exponential tail rate sqrt(2).
        let tail = form.upper_tail.unwrap();
        assert!(
            (tail.decay_rate - SQRT2).abs() < 0.05,
            "tail rate {} vs sqrt(2)",
            tail.decay_rate
        );
    }

    #[test]
    fn monotone_inversion_round_trip() {
        let f = pot(&[0.0, 0.0, -1.0, 1.0]);
        let iv = from_zero_interval(&f, 0.0);
        let form = elementary_form(&f, 0.0, &iv, FormKind::B1, 256, 1e-8).unwrap();
        for i in (0..form.us().len()).step_by(7) {
            let u = form.us()[i];
            let t = form.ts()[i];
            assert!((form.u_of_t(t) - u).abs() <= 1e-9, "knot {i}");
        }
        // Off-grid round trip.
        for i in 1..20 {
            let u_star = 0.05 * i as f64 * 0.99;
            let t_star = form.t_of_u(u_star);
            assert!((form.u_of_t(t_star) - u_star).abs() <= 1e-9);
        }
    }

    #[test]
    fn peaked_periodic_profile_shape() {
        let f = pot(&[0.0, -1.0, 1.0]);
        let p = build_peaked_periodic(&f, &BuildOptions::default()).unwrap();
        let period = 2.0 * SQRT2;
        assert_eq!(p.singular_set.len(), 3);
        for (k, &(tk, kind)) in p.singular_set.iter().enumerate() {
            assert!((tk - k as f64 * period).abs() < 1e-8);
            match kind {
                SingKind::Peak(a) => assert!((a - SQRT2).abs() < 1e-10),
                other => panic!("expected peak, got {other:?}"),
            }
        }
        // Profile equals the parabola chain.
        let mut worst = 0.0f64;
        for s in &p.samples {
            let phase = (s.t / period - (s.t / period).floor()) * period;
            let exact = 1.0 - (phase - SQRT2) * (phase - SQRT2) / 2.0;
            worst = worst.max((s.u - exact).abs());
        }
        assert!(worst <= 1e-6, "peaked periodic vs parabola: {worst}");
        // Minimum is exactly zero at the marked peaks.
        for &(tk, _) in &p.singular_set {
            let s = p.samples.iter().find(|s| (s.t - tk).abs() < 1e-12).unwrap();
            assert_eq!(s.u, 0.0);
        }
    }

    #[test]
    fn peaked_solitary_matches_exponential() {
        // F = -u(u-1)^2: u(t) = 1 - exp(-sqrt(2)|t|).
        let f = pot(&[0.0, -1.0, 2.0, -1.0]);
        let p = build_peaked_solitary(&f, &BuildOptions::default()).unwrap();
        let mut worst = 0.0f64;
        for s in &p.samples {
            let exact = 1.0 - (-SQRT2 * s.t.abs()).exp();
            worst = worst.max((s.u - exact).abs());
        }
        assert!(worst <= 1e-6, "peaked solitary vs closed form: {worst}");
    }

    #[test]
    fn compacton_zero_outside_support() {
        let f = pot(&[0.0, 0.0, -1.0, 1.0]);
        let p = build_compacton(&f, &BuildOptions::default()).unwrap();
        let support = PI * SQRT2;
        for s in &p.samples {
            if s.t < -1e-12 || s.t > support + 1e-12 {
                assert_eq!(s.u, 0.0);
                assert_eq!(s.dudt, 0.0);
            }
        }
        let mut worst = 0.0f64;
        for s in &p.samples {
            let exact = if s.t <= 0.0 || s.t >= support {
                0.0
            } else {
                (s.t / SQRT2).sin().powi(2)
            };
            worst = worst.max((s.u - exact).abs());
        }
        assert!(worst <= 1e-6, "compacton vs sin^2: {worst}");
    }

    #[test]
    fn composite_placement_and_overlap() {
        let f = pot(&[0.0, 0.0, -1.0, 1.0]);
        let spec = CompositionSpec {
            placements: vec![0.0, 2.0],
            periodic: None,
        };
        let p = build_composite(&f, &spec, &BuildOptions::default()).unwrap();
        assert_eq!(p.singular_set.len(), 4);
        let support = PI * SQRT2;
        // Gap of one support length between the copies.
        assert!((p.singular_set[2].0 - 2.0 * support).abs() < 1e-8);

        let bad = CompositionSpec {
            placements: vec![0.0, 0.5],
            periodic: None,
        };
        assert!(matches!(
            build_composite(&f, &bad, &BuildOptions::default()),
            Err(Error::OverlappingSupports(_, _))
        ));

        let per = CompositionSpec {
            placements: vec![],
            periodic: Some(2.0),
        };
        let p = build_composite(&f, &per, &BuildOptions::default()).unwrap();
        assert!((p.meta.attributes.period.unwrap() - 2.0 * support).abs() < 1e-8);
    }

    #[test]
    fn front_and_plateau_shapes() {
        let f = pot(&[0.0, 0.0, -1.0, 2.0, -1.0]); // -u^2 (u-1)^2
        let p = build_front(&f, FrontDirection::Rising, &BuildOptions::default()).unwrap();
        let mut worst = 0.0f64;
        for s in &p.samples {
            let exact = if s.t <= 0.0 {
                0.0
            } else {
                (s.t / SQRT2).tanh().powi(2)
            };
            worst = worst.max((s.u - exact).abs());
        }
        assert!(worst <= 1e-6, "rising front vs tanh^2: {worst}");

        let p = build_plateau(&f, 1.0, &BuildOptions::default()).unwrap();
        assert_eq!(p.singular_set.len(), 2);
        for s in &p.samples {
            if s.t > 1e-12 && s.t < 1.0 - 1e-12 {
                assert_eq!(s.u, 0.0);
            }
        }

        let p = build_plateau(&f, 0.0, &BuildOptions::default()).unwrap();
        assert!(p.singular_set.is_empty());
        assert_eq!(p.meta.tag, WaveTag::SmoothSolitaryMin);
    }

    #[test]
    fn cusped_periodic_matches_quadrature_oracle() {
        // F = u, h = 1: t(u) = (arcsin(sqrt u) - sqrt(u(1-u))) / sqrt(2)
        // on the rising half from the cusp.
        let f = pot(&[0.0, 1.0]);
        let p = build_cusped_periodic(&f, 1.0, &BuildOptions::default()).unwrap();
        let period = PI / SQRT2;
        assert!((p.singular_set[1].0 - period).abs() < 1e-8);
        let t_of_u = |u: f64| (u.sqrt().asin() - (u * (1.0 - u)).sqrt()) / SQRT2;
        let mut worst = 0.0f64;
        for s in &p.samples {
            if s.t >= 0.0 && s.t <= period / 2.0 && s.u > 1e-9 {
                worst = worst.max((t_of_u(s.u) - s.t).abs());
            }
        }
        assert!(worst <= 1e-8, "cusped arc vs closed form: {worst}");
    }

    #[test]
    fn cusped_solitary_tail_and_symmetry() {
        // F = -(u-1)^2, h = 0: u -> 1 exponentially, cusp at t = 0.
        let f = pot(&[-1.0, 2.0, -1.0]);
        let p = build_cusped_solitary(&f, 0.0, &BuildOptions::default()).unwrap();
        assert_eq!(p.singular_set.len(), 1);
        let tail = p.truncation.unwrap();
        assert!((tail.decay_rate - SQRT2).abs() < 0.05);
        // t(u) closed form: sqrt(2) (atanh(sqrt u) - sqrt u).
        let t_of_u = |u: f64| SQRT2 * ((u.sqrt()).atanh() - u.sqrt());
        let mut worst = 0.0f64;
        for s in &p.samples {
            if s.t > 0.0 && s.u > 1e-9 && s.u < 0.999 {
                worst = worst.max((t_of_u(s.u) - s.t).abs());
            }
        }
        assert!(worst <= 1e-7, "cusped solitary arc: {worst}");
        // Symmetry u(t) = u(-t) on mirrored samples.
        for s in p.samples.iter().filter(|s| s.t > 0.0) {
            if let Some(mirror) = p
                .samples
                .iter()
                .find(|q| (q.t + s.t).abs() <= 1e-12 * p.t_max().max(1.0))
            {
                assert!((mirror.u - s.u).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn energy_conserved_on_all_builders() {
        let cases: Vec<(Potential, f64)> = vec![
            (pot(&[0.0, -1.0, 1.0]), 0.0),
            (pot(&[0.0, 0.0, -1.0, 1.0]), 0.0),
            (pot(&[0.0, 1.0]), 1.0),
            (pot(&[-1.0, 2.0, -1.0]), 0.0),
        ];
        for (f, h) in cases {
            for class in classify_level(&f, h) {
                if class.tag == WaveTag::NoneSingular {
                    continue;
                }
                let p = build_profile(&f, h, &class, &BuildOptions::default()).unwrap();
                let singular_ts: Vec<f64> = p.singular_set.iter().map(|x| x.0).collect();
                let dt = p.base_dt();
                let mut worst = 0.0f64;
                for s in &p.samples {
                    if singular_ts.iter().any(|&tk| (s.t - tk).abs() < 2.0 * dt) {
                        continue;
                    }
                    let res = (s.u * s.dudt * s.dudt / 2.0 + f.eval(s.u, 0) - h).abs();
                    worst = worst.max(res);
                }
                let scale = f.scale_at(1.0).max(h.abs()).max(1.0);
                assert!(
                    worst <= 1e-7 * scale,
                    "energy violation {worst} for {:?}",
                    class.tag
                );
            }
        }
    }
}
