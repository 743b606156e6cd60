//! Shallow-water applications: reduction of the Camassa-Holm equation, the
//! equation for surface waves of moderate amplitude, and the generalized
//! Camassa-Holm family to polynomial potentials; case analysis; energy
//! classification tables; and the peaked-solitary scan for the generalized
//! family with non-positive cubic parameter.

use crate::classify::{classify_level, peaked_admissible};
use crate::error::Result;
use crate::poly::Poly;
use crate::potential::{CritKind, Potential};
use crate::tol::TOL_ENERGY;
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------------------
// Camassa-Holm
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChParams {
    pub c: f64,
    pub kappa: f64,
    pub r: f64,
}

#[derive(Debug, Clone)]
pub struct ChReduction {
    pub potential: Potential,
    /// Linear coefficient A = r - 2 kappa c - c^2 / 2.
    pub a: f64,
    /// Quadratic coefficient after sign normalization (B >= 0).
    pub b: f64,
    /// Whether the w -> -w flip was applied to reach B >= 0. Profiles in
    /// the flipped frame describe the original w < 0 branch mirrored.
    pub normalized: bool,
}

/// Moving-frame reduction of Camassa-Holm: F(w) = A w + B w^2 - w^3 / 2
/// with w = u - c, normalized to B >= 0.
pub fn ch_reduce(p: &ChParams) -> Result<ChReduction> {
    let a = p.r - 2.0 * p.kappa * p.c - 0.5 * p.c * p.c;
    let b = -(p.c + p.kappa);
    let (b_norm, flipped) = if b < 0.0 { (-b, true) } else { (b, false) };
    let potential = Potential::new(vec![0.0, a, b_norm, -0.5])?;
    Ok(ChReduction {
        potential,
        a,
        b: b_norm,
        normalized: flipped,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChCase {
    I,
    II,
    III,
    IV,
    V,
    VI,
}

/// Sign-condition case table on (A, B >= 0): discriminant 4B^2 + 6A decides
/// whether extrema exist, B^2 + 2A locates the level of the positive local
/// maximum relative to zero. A = B = 0 degenerates like case VI (no
/// extremum gives no bounded wave).
pub fn ch_case(a: f64, b: f64) -> ChCase {
    let tol = TOL_ENERGY * a.abs().max(b * b).max(1.0);
    if a > tol {
        return ChCase::I;
    }
    if a.abs() <= tol {
        return if b > tol { ChCase::II } else { ChCase::VI };
    }
    let disc = 4.0 * b * b + 6.0 * a;
    if disc <= tol {
        return ChCase::VI;
    }
    let e = b * b + 2.0 * a;
    if e > tol {
        ChCase::III
    } else if e.abs() <= tol {
        ChCase::IV
    } else {
        ChCase::V
    }
}

// ---------------------------------------------------------------------------
// Moderate-amplitude surface waves
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MaseParams {
    pub c: f64,
    /// Integration constant of the once-integrated moving-frame equation.
    pub k: f64,
}

#[derive(Debug, Clone)]
pub struct MaseReduction {
    pub potential: Potential,
    /// Shift d = (1 + c) / 14 applied to remove the u'' prefactor offset.
    pub shift: f64,
}

fn mase_g(p: &MaseParams) -> Poly {
    Poly::new(vec![p.k, 1.0 - p.c, 3.0, -2.0, 3.0])
}

/// Reduction of the moderate-amplitude equation: F is the quintic
/// antiderivative of G(w - d), G(u) = K + (1 - c) u + 3u^2 - 2u^3 + 3u^4,
/// normalized so F(0) = 0 (the integration constant only enters through
/// F', and energies are reported relative to h0 = 0).
pub fn mase_reduce(p: &MaseParams) -> Result<MaseReduction> {
    let d = (1.0 + p.c) / 14.0;
    let fpoly = mase_g(p).shift(-d).antiderivative();
    let potential = Potential::new(fpoly.coeffs().to_vec())?;
    Ok(MaseReduction {
        potential,
        shift: d,
    })
}

/// Position of the two extrema p1 (local max) < p2 (local min) relative to
/// zero, and the sign of h2 - h0 when both are positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MaseCase {
    /// 0 < p1 < p2, h2 > h0
    PosPosHigh,
    /// 0 < p1 < p2, h2 < h0
    PosPosLow,
    /// 0 < p1 < p2, h2 = h0
    PosPosEq,
    /// 0 = p1 < p2
    ZeroPos,
    /// p1 < 0 < p2
    NegPos,
    /// p1 < p2 = 0
    NegZero,
    /// p1 < p2 < 0
    NegNeg,
    NoExtrema,
}

impl MaseCase {
    pub const ALL: [MaseCase; 7] = [
        MaseCase::PosPosHigh,
        MaseCase::PosPosLow,
        MaseCase::PosPosEq,
        MaseCase::ZeroPos,
        MaseCase::NegPos,
        MaseCase::NegZero,
        MaseCase::NegNeg,
    ];
}

/// Extrema of F over the whole line, genuine max/min only.
fn real_extrema(f: &Potential) -> Vec<(f64, f64, CritKind)> {
    let bound = f.poly().derivative().cauchy_root_bound();
    f.extrema(-bound, bound)
        .unwrap_or_default()
        .into_iter()
        .filter(|c| c.kind != CritKind::Inflection)
        .map(|c| (c.location, c.value, c.kind))
        .collect()
}

pub fn mase_case(red: &MaseReduction) -> MaseCase {
    let ex = real_extrema(&red.potential);
    if ex.len() < 2 {
        return MaseCase::NoExtrema;
    }
    let (p1, _h1, k1) = ex[0];
    let (p2, h2, _k2) = ex[1];
    debug_assert_eq!(k1, CritKind::LocalMax);
    let tol_x = TOL_ENERGY * p2.abs().max(1.0);
    let tol_h = TOL_ENERGY * red.potential.scale_at(p2).max(1.0);
    if p1 > tol_x {
        if h2 > tol_h {
            MaseCase::PosPosHigh
        } else if h2 < -tol_h {
            MaseCase::PosPosLow
        } else {
            MaseCase::PosPosEq
        }
    } else if p1.abs() <= tol_x {
        MaseCase::ZeroPos
    } else if p2 > tol_x {
        MaseCase::NegPos
    } else if p2.abs() <= tol_x {
        MaseCase::NegZero
    } else {
        MaseCase::NegNeg
    }
}

/// Helper: extrema data (p1, p2, h2) for given parameters, when two extrema
/// exist.
fn mase_extrema(c: f64, k: f64) -> Option<(f64, f64, f64)> {
    let red = mase_reduce(&MaseParams { c, k }).ok()?;
    let ex = real_extrema(&red.potential);
    if ex.len() < 2 {
        return None;
    }
    Some((ex[0].0, ex[1].0, ex[1].1))
}

/// Searches a coarse grid of wave speeds for parameters realizing the given
/// extrema-position case; equality cases (p1 = 0, p2 = 0, h2 = h0) are
/// pinned by the exact coefficient condition or by bisection in K (h2 is
/// strictly increasing in K since dh2/dK = p2 > 0).
pub fn find_mase_params(case: MaseCase) -> Option<MaseParams> {
    for c_int in -15..=15 {
        let c = c_int as f64;
        let d = (1.0 + c) / 14.0;
        let g_tail = Poly::new(vec![0.0, 1.0 - c, 3.0, -2.0, 3.0]);
        // G' is strictly increasing (G'' > 0 everywhere): unique minimum.
        let dg = g_tail.derivative();
        let bound = dg.cauchy_root_bound();
        let u_star = match dg.real_roots_in(-bound, bound, 1e-12) {
            Ok(r) if r.len() == 1 => r[0],
            _ => continue,
        };
        let k_merge = -g_tail.eval(u_star);
        let k_zero = -g_tail.eval(-d); // K with an extremum exactly at w = 0

        let candidates: Vec<f64> = match case {
            MaseCase::ZeroPos => {
                if -d < u_star && k_zero < k_merge {
                    vec![k_zero]
                } else {
                    continue;
                }
            }
            MaseCase::NegZero => {
                if -d > u_star && k_zero < k_merge {
                    vec![k_zero]
                } else {
                    continue;
                }
            }
            MaseCase::NegPos => {
                if -d < u_star {
                    vec![k_zero - 1.0, k_zero - 10.0]
                } else {
                    continue;
                }
            }
            MaseCase::NegNeg => {
                if -d > u_star && k_zero < k_merge {
                    vec![0.5 * (k_zero + k_merge)]
                } else {
                    continue;
                }
            }
            MaseCase::PosPosHigh | MaseCase::PosPosLow | MaseCase::PosPosEq => {
                if !(-d < u_star && k_zero < k_merge) {
                    continue;
                }
                let margin = 1e-3 * (k_merge - k_zero);
                let (k_lo, k_hi) = (k_zero + margin, k_merge - margin);
                let h2_at = |k: f64| mase_extrema(c, k).map(|x| x.2);
                let (h_lo, h_hi) = match (h2_at(k_lo), h2_at(k_hi)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => continue,
                };
                if h_lo < 0.0 && h_hi > 0.0 {
                    // Bisect h2(K) = 0.
                    let (mut lo, mut hi) = (k_lo, k_hi);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        match h2_at(mid) {
                            Some(h) if h < 0.0 => lo = mid,
                            Some(_) => hi = mid,
                            None => break,
                        }
                    }
                    let k_eq = 0.5 * (lo + hi);
                    match case {
                        MaseCase::PosPosEq => vec![k_eq],
                        MaseCase::PosPosHigh => vec![0.5 * (k_eq + k_hi)],
                        MaseCase::PosPosLow => vec![0.5 * (k_lo + k_eq)],
                        _ => unreachable!(),
                    }
                } else {
                    match case {
                        MaseCase::PosPosHigh if h_lo > 0.0 => vec![0.5 * (k_lo + k_hi)],
                        MaseCase::PosPosLow if h_hi < 0.0 => vec![0.5 * (k_lo + k_hi)],
                        _ => continue,
                    }
                }
            }
            MaseCase::NoExtrema => vec![k_merge + 1.0],
        };

        for k in candidates {
            let params = MaseParams { c, k };
            if let Ok(red) = mase_reduce(&params) {
                if mase_case(&red) == case {
                    return Some(params);
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Generalized Camassa-Holm
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GchParams {
    pub a: f64,
    pub c: f64,
    pub kappa: f64,
    pub r: f64,
}

#[derive(Debug, Clone)]
pub struct GchReduction {
    pub potential: Potential,
    pub a_lin: f64,
    pub b_quad: f64,
    pub normalized: bool,
}

/// F(w) = A w + B w^2 - (a/6) w^3 with A = r + (1 - a/2) c^2 - 2 kappa c
/// and B = (1 - a) c / 2 - kappa, sign-normalized to B >= 0 (a = 3 recovers
/// Camassa-Holm). Degenerate parameter combinations where every
/// coefficient vanishes are rejected.
pub fn gch_reduce(p: &GchParams) -> Result<GchReduction> {
    let a_lin = p.r + (1.0 - 0.5 * p.a) * p.c * p.c - 2.0 * p.kappa * p.c;
    let b_quad = (1.0 - p.a) * p.c / 2.0 - p.kappa;
    let (b_norm, flipped) = if b_quad < 0.0 {
        (-b_quad, true)
    } else {
        (b_quad, false)
    };
    let potential = Potential::new(vec![0.0, a_lin, b_norm, -p.a / 6.0])?;
    Ok(GchReduction {
        potential,
        a_lin,
        b_quad: b_norm,
        normalized: flipped,
    })
}

#[derive(Debug, Clone)]
pub struct GchGrid {
    pub a: Vec<f64>,
    pub c: Vec<f64>,
    pub kappa: Vec<f64>,
    pub r: Vec<f64>,
}

impl Default for GchGrid {
    fn default() -> Self {
        GchGrid {
            a: vec![-2.0, -1.0, 0.0],
            c: vec![-2.0, -1.0, 1.0, 2.0],
            kappa: vec![-1.0, 0.0, 1.0],
            r: vec![-1.0, 0.0, 1.0],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GchScanRecord {
    pub params: GchParams,
    /// Whether a peaked solitary wave was found (a conjecture
    /// counterexample when the cubic parameter is non-positive).
    pub peaked_solitary: bool,
    /// Number of genuine extrema of F over the line; the analytic
    /// certificate needs at most two.
    pub extrema_count: usize,
    /// At most two extrema, and F'(0) < 0 does not co-occur with a critical
    /// first-return point.
    pub certificate_ok: bool,
    /// Reduction degenerated (all coefficients zero).
    pub degenerate: bool,
}

/// Scan work for one grid point: reduce, test peaked-solitary
/// admissibility, and record the certificate data.
pub fn peaked_scan_point(p: &GchParams) -> GchScanRecord {
    match gch_reduce(p) {
        Ok(red) => {
            let adm = peaked_admissible(&red.potential);
            let peaked_solitary = adm.map(|x| x.solitary).unwrap_or(false);
            let extrema_count = real_extrema(&red.potential).len();
            GchScanRecord {
                params: *p,
                peaked_solitary,
                extrema_count,
                certificate_ok: extrema_count <= 2 && !peaked_solitary,
                degenerate: false,
            }
        }
        Err(_) => GchScanRecord {
            params: *p,
            peaked_solitary: false,
            extrema_count: 0,
            certificate_ok: true,
            degenerate: true,
        },
    }
}

/// Scans the parameter grid for peaked solitary waves of the generalized
/// family. Every record also carries the analytic certificate data: with at
/// most two extrema and F unbounded in both directions, F'(0) < 0 forces a
/// regular first-return point, so no peaked solitary wave can form.
pub fn gch_conjecture_scan(grid: &GchGrid) -> Vec<GchScanRecord> {
    let mut points = Vec::new();
    for &a in &grid.a {
        for &c in &grid.c {
            for &kappa in &grid.kappa {
                for &r in &grid.r {
                    points.push(GchParams { a, c, kappa, r });
                }
            }
        }
    }
    crate::exec::par_map(&points, peaked_scan_point)
}

// ---------------------------------------------------------------------------
// Energy tables
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Band {
    Below,
    At(usize),
    Between(usize, usize),
    Above,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub band: Band,
    pub label: String,
    pub h: f64,
    pub tags: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyTable {
    /// Sorted distinct critical levels with their names (h0 plus extremum
    /// values; merged levels carry joined labels like "h0=h2").
    pub levels: Vec<(String, f64)>,
    pub rows: Vec<TableRow>,
}

/// Names the critical levels: h0 = F(0), then h1, h2, ... for the extremum
/// values in order of extremum location.
pub fn labeled_levels(f: &Potential) -> Vec<(String, f64)> {
    let mut named: Vec<(String, f64)> = vec![("h0".into(), f.h0())];
    for (i, (_, value, _)) in real_extrema(f).iter().enumerate() {
        named.push((format!("h{}", i + 1), *value));
    }
    // Merge equal levels, joining labels.
    named.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut out: Vec<(String, f64)> = Vec::new();
    for (label, v) in named {
        match out.last_mut() {
            Some((l, prev)) if (v - *prev).abs() <= TOL_ENERGY * v.abs().max(1.0) => {
                l.push('=');
                l.push_str(&label);
            }
            _ => out.push((label, v)),
        }
    }
    out
}

/// Classifies one representative level per energy band (below, at, and
/// between the critical levels, and above) so the rows align with the
/// case-table boundaries.
pub fn reproduce_table(f: &Potential) -> EnergyTable {
    let levels = labeled_levels(f);
    let values: Vec<f64> = levels.iter().map(|x| x.1).collect();
    let span = values.last().unwrap() - values.first().unwrap();
    let gap = 0.5 * span.abs().max(1.0);

    let mut rows_spec: Vec<(Band, String, f64)> = Vec::new();
    rows_spec.push((Band::Below, format!("h < {}", levels[0].0), values[0] - gap));
    for i in 0..values.len() {
        rows_spec.push((Band::At(i), format!("h = {}", levels[i].0), values[i]));
        if i + 1 < values.len() {
            rows_spec.push((
                Band::Between(i, i + 1),
                format!("{} < h < {}", levels[i].0, levels[i + 1].0),
                0.5 * (values[i] + values[i + 1]),
            ));
        }
    }
    rows_spec.push((
        Band::Above,
        format!("h > {}", levels.last().unwrap().0),
        values.last().unwrap() + gap,
    ));

    let rows = crate::exec::par_map(&rows_spec, |(band, label, h)| {
        let mut tags: Vec<String> = classify_level(f, *h)
            .into_iter()
            .map(|c| c.tag.as_str().to_string())
            .collect();
        tags.sort();
        tags.dedup();
        TableRow {
            band: *band,
            label: label.clone(),
            h: *h,
            tags,
        }
    });
    EnergyTable { levels, rows }
}

impl EnergyTable {
    /// Aligned-text rendering, one row per energy band.
    pub fn to_text(&self) -> String {
        let width = self
            .rows
            .iter()
            .map(|r| r.label.len())
            .max()
            .unwrap_or(8)
            .max(8);
        let mut out = String::new();
        for (label, v) in &self.levels {
            out.push_str(&format!("{label} = {v:.12e}\n"));
        }
        out.push('\n');
        for row in self.rows.iter().rev() {
            let tags = if row.tags.is_empty() {
                "-".to_string()
            } else {
                row.tags.join(", ")
            };
            out.push_str(&format!("{:<width$}  {}\n", row.label, tags));
        }
        out
    }

    pub fn tags_at(&self, band: Band) -> Option<&[String]> {
        self.rows
            .iter()
            .find(|r| r.band == band)
            .map(|r| r.tags.as_slice())
    }
}

/// Model selector used by the CLI and table tests.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ModelParams {
    Ch(ChParams),
    Mase(MaseParams),
    Gch(GchParams),
}

impl ModelParams {
    pub fn reduce(&self) -> Result<Potential> {
        match self {
            ModelParams::Ch(p) => ch_reduce(p).map(|r| r.potential),
            ModelParams::Mase(p) => mase_reduce(p).map(|r| r.potential),
            ModelParams::Gch(p) => gch_reduce(p).map(|r| r.potential),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ch_reduce_anchor() {
        // (c, kappa, r) = (-1, 0, 0): A = -1/2, B = 1,
        // F = -w/2 + w^2 - w^3/2 = -(w/2)(w-1)^2.
        let red = ch_reduce(&ChParams {
            c: -1.0,
            kappa: 0.0,
            r: 0.0,
        })
        .unwrap();
        assert_eq!(red.a, -0.5);
        assert_eq!(red.b, 1.0);
        assert!(!red.normalized);
        assert_eq!(red.potential.coeffs(), &[0.0, -0.5, 1.0, -0.5]);
    }

    #[test]
    fn ch_reduction_reproduces_moving_frame_terms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = ChParams {
                c: rng.gen_range(-2.0..2.0),
                kappa: rng.gen_range(-1.0..1.0),
                r: rng.gen_range(-1.0..1.0),
            };
            let red = ch_reduce(&p).unwrap();
            if red.normalized {
                continue;
            }
            for _ in 0..100 {
                let w: f64 = rng.gen_range(-3.0..3.0);
                let u = w + p.c;
                let target = p.r + (p.c - 2.0 * p.kappa) * u - 1.5 * u * u;
                let got = red.potential.eval(w, 1);
                assert!(
                    (got - target).abs() <= 1e-12 * target.abs().max(1.0),
                    "F'({w}) = {got} vs {target}"
                );
            }
        }
    }

    #[test]
    fn ch_extrema_match_closed_form() {
        let red = ch_reduce(&ChParams {
            c: 0.0,
            kappa: -1.0,
            r: -0.25,
        })
        .unwrap();
        let (a, b) = (red.a, red.b);
        let disc = 4.0 * b * b + 6.0 * a;
        assert!(disc > 0.0);
        let p1 = (2.0 * b - disc.sqrt()) / 3.0;
        let p2 = (2.0 * b + disc.sqrt()) / 3.0;
        let ex = real_extrema(&red.potential);
        assert_eq!(ex.len(), 2);
        assert!((ex[0].0 - p1).abs() <= 1e-12 * p1.abs().max(1.0));
        assert!((ex[1].0 - p2).abs() <= 1e-12 * p2.abs().max(1.0));
    }

    #[test]
    fn ch_case_examples() {
        assert_eq!(ch_case(-0.5, 1.0), ChCase::IV);
        assert_eq!(ch_case(1.0, 0.0), ChCase::I);
        assert_eq!(ch_case(-1.0, 1.0), ChCase::VI);
        assert_eq!(ch_case(0.0, 1.0), ChCase::II);
        assert_eq!(ch_case(-1.0, 2.0), ChCase::III);
        assert_eq!(ch_case(-1.0, 1.3), ChCase::V);
    }

    #[test]
    fn ch_sign_normalization_flip() {
        // c = 1, kappa = 0 gives B = -(c + kappa) = -1 < 0: the w -> -w
        // flip is applied and recorded. The flipped potential is
        // -F(-w) of the unflipped one.
        let red = ch_reduce(&ChParams {
            c: 1.0,
            kappa: 0.0,
            r: 0.0,
        })
        .unwrap();
        assert!(red.normalized);
        assert!(red.b >= 0.0);
        let unflipped = Potential::new(vec![0.0, red.a, -red.b, -0.5]).unwrap();
        for i in 0..50 {
            let w = -2.0 + 4.0 * i as f64 / 49.0;
            let lhs = red.potential.eval(w, 0);
            let rhs = -unflipped.eval(-w, 0);
            assert!((lhs - rhs).abs() <= 1e-12 * red.potential.scale_at(w).max(1.0));
        }
    }

    #[test]
    fn gch_with_a3_recovers_ch() {
        let gch = gch_reduce(&GchParams {
            a: 3.0,
            c: -1.0,
            kappa: 0.0,
            r: 0.0,
        })
        .unwrap();
        let ch = ch_reduce(&ChParams {
            c: -1.0,
            kappa: 0.0,
            r: 0.0,
        })
        .unwrap();
        assert_eq!(gch.potential.coeffs(), ch.potential.coeffs());
    }

    #[test]
    fn gch_degenerate_degree_guard() {
        // a = 0 drops the cubic term; quadratic potential is fine.
        let red = gch_reduce(&GchParams {
            a: 0.0,
            c: 1.0,
            kappa: 0.0,
            r: 0.0,
        })
        .unwrap();
        assert_eq!(red.potential.degree(), 2);
        // All-zero coefficients are rejected.
        assert!(gch_reduce(&GchParams {
            a: 0.0,
            c: 0.0,
            kappa: 0.0,
            r: 0.0,
        })
        .is_err());
    }

    #[test]
    fn mase_reduce_shift_and_soundness() {
        use rand::{Rng, SeedableRng};
        let p = MaseParams { c: 1.0, k: 0.0 };
        let red = mase_reduce(&p).unwrap();
        assert_eq!(red.shift, 1.0 / 7.0);
        assert_eq!(red.potential.eval(0.0, 0), 0.0);
        // F'(0) = G(-1/7) = 3/49 + 2/343 + 3/2401 = 164/2401.
        let expect = 164.0 / 2401.0;
        assert!((red.potential.eval(0.0, 1) - expect).abs() < 1e-14);

        let g = mase_g(&p);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let w: f64 = rng.gen_range(-2.0..2.0);
            let got = red.potential.eval(w, 1);
            let target = g.eval(w - red.shift);
            assert!((got - target).abs() <= 1e-12 * target.abs().max(1.0));
        }
    }

    #[test]
    fn mase_case_search_finds_every_case() {
        for case in MaseCase::ALL {
            let p = find_mase_params(case)
                .unwrap_or_else(|| panic!("no parameters found for {case:?}"));
            let red = mase_reduce(&p).unwrap();
            assert_eq!(mase_case(&red), case, "params {p:?}");
        }
    }

    #[test]
    fn gch_scan_control_point() {
        let grid = GchGrid {
            a: vec![3.0],
            c: vec![-1.0],
            kappa: vec![0.0],
            r: vec![0.0],
        };
        let recs = gch_conjecture_scan(&grid);
        assert_eq!(recs.len(), 1);
        assert!(recs[0].peaked_solitary);

        let recs = gch_conjecture_scan(&GchGrid::default());
        assert!(recs.iter().all(|r| !r.peaked_solitary));
        assert!(recs.iter().all(|r| r.certificate_ok));
    }

    #[test]
    fn ch_case_ii_table_rows() {
        // A = 0, B = 1 via (c, kappa, r) = (0, -1, 0).
        let red = ch_reduce(&ChParams {
            c: 0.0,
            kappa: -1.0,
            r: 0.0,
        })
        .unwrap();
        assert_eq!(ch_case(red.a, red.b), ChCase::II);
        let table = reproduce_table(&red.potential);
        // Levels: h1 = h0 = 0 (p1 = 0) and h2 > 0.
        assert_eq!(table.levels.len(), 2);
        let at_h0 = table.tags_at(Band::At(0)).unwrap();
        assert!(at_h0.contains(&"constant".to_string()));
        let mid = table.tags_at(Band::Between(0, 1)).unwrap();
        assert!(mid.contains(&"cusped-periodic".to_string()));
        let at_h2 = table.tags_at(Band::At(1)).unwrap();
        assert!(at_h2.contains(&"cusped-solitary".to_string()));
        assert!(table.tags_at(Band::Above).unwrap().is_empty());
        assert!(table.tags_at(Band::Below).unwrap().is_empty());
    }

    #[test]
    fn model_params_json() {
        let v: ModelParams =
            serde_json::from_str(r#"{"model":"ch","c":-1.0,"kappa":0.0,"r":0.0}"#).unwrap();
        let f = v.reduce().unwrap();
        assert_eq!(f.coeffs(), &[0.0, -0.5, 1.0, -0.5]);
    }
}
