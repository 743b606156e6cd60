//! The decision engine: for a potential F and an energy level h, produce
//! every bounded traveling-wave class the level supports.
//!
//! Interior branch intervals carry the smooth waves (periodic, solitary,
//! front, by endpoint criticality). From-zero intervals at the level
//! h0 = F(0) carry the singular families, dispatched on the vanish order of
//! F at the singular line: order 1 gives peaked waves, order 2 the
//! compact-support family, order >= 3 nothing singular (the branch speed is
//! Lipschitz at u = 0). From-zero intervals above h0 carry cusped waves.
//! Constant solutions sit at critical points of F whose value equals h.

use crate::potential::{
    BranchInterval, EndpointClass, EndpointDiag, IntervalKind, Potential, ZeroContact,
};
use crate::quad::{period, transit_time, PeriodMode, Sign, SpeedBranch};
use crate::tol::{QUAD_TOL, TOL_ENERGY};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WaveTag {
    SmoothPeriodic,
    SmoothSolitaryMax,
    SmoothSolitaryMin,
    SmoothFront,
    PeakedPeriodic,
    PeakedSolitary,
    Compacton,
    CompositeAdmissible,
    FrontFiniteDecay,
    Plateau,
    CuspedPeriodic,
    CuspedSolitary,
    Constant,
    NoneSingular,
}

impl WaveTag {
    pub fn as_str(self) -> &'static str {
        match self {
            WaveTag::SmoothPeriodic => "smooth-periodic",
            WaveTag::SmoothSolitaryMax => "smooth-solitary-max",
            WaveTag::SmoothSolitaryMin => "smooth-solitary-min",
            WaveTag::SmoothFront => "smooth-front",
            WaveTag::PeakedPeriodic => "peaked-periodic",
            WaveTag::PeakedSolitary => "peaked-solitary",
            WaveTag::Compacton => "compacton",
            WaveTag::CompositeAdmissible => "composite-admissible",
            WaveTag::FrontFiniteDecay => "front-finite-decay",
            WaveTag::Plateau => "plateau",
            WaveTag::CuspedPeriodic => "cusped-periodic",
            WaveTag::CuspedSolitary => "cusped-solitary",
            WaveTag::Constant => "constant",
            WaveTag::NoneSingular => "none-singular",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "smooth-periodic" => WaveTag::SmoothPeriodic,
            "smooth-solitary-max" => WaveTag::SmoothSolitaryMax,
            "smooth-solitary-min" => WaveTag::SmoothSolitaryMin,
            "smooth-front" => WaveTag::SmoothFront,
            "peaked-periodic" => WaveTag::PeakedPeriodic,
            "peaked-solitary" => WaveTag::PeakedSolitary,
            "compacton" => WaveTag::Compacton,
            "composite-admissible" => WaveTag::CompositeAdmissible,
            "front-finite-decay" => WaveTag::FrontFiniteDecay,
            "plateau" => WaveTag::Plateau,
            "cusped-periodic" => WaveTag::CuspedPeriodic,
            "cusped-solitary" => WaveTag::CuspedSolitary,
            "constant" => WaveTag::Constant,
            "none-singular" => WaveTag::NoneSingular,
            _ => return None,
        })
    }

    pub fn is_peaked(self) -> bool {
        matches!(self, WaveTag::PeakedPeriodic | WaveTag::PeakedSolitary)
    }

    /// The compact-support family: compactons, composites, finite-decay
    /// fronts and plateaus (mutually exclusive with peaked waves).
    pub fn is_compact_family(self) -> bool {
        matches!(
            self,
            WaveTag::Compacton
                | WaveTag::CompositeAdmissible
                | WaveTag::FrontFiniteDecay
                | WaveTag::Plateau
        )
    }
}

/// Optional scalar attributes attached to a wave class.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Attributes {
    pub period: Option<f64>,
    pub support: Option<f64>,
    pub peak_slope: Option<f64>,
    pub crest: Option<f64>,
    pub trough: Option<f64>,
    pub asymptote: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct WaveClass {
    pub tag: WaveTag,
    pub interval: BranchInterval,
    pub attributes: Attributes,
}

/// Result of the peaked-wave admissibility test: the smallest m > 0 with
/// F(m) = F(0) and F < F(0) on (0, m), the peak slope a = sqrt(-2 F'(0)),
/// and whether the wave is solitary (F'(m) = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakedAdmissible {
    pub m: f64,
    pub a: f64,
    pub solitary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompactonAdmissible {
    pub m: f64,
    /// true when F'(m) = 0: fronts/plateaus instead of compactons.
    pub front_mode: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CuspedAdmissible {
    pub m: f64,
    pub solitary: bool,
}

fn from_zero_interval(f: &Potential, h: f64) -> Option<BranchInterval> {
    let u_max = f.default_u_max(h);
    f.admissible_intervals(h, u_max)
        .ok()?
        .into_iter()
        .find(|iv| iv.kind == IntervalKind::FromZero)
}

/// Peaked waves exist iff F'(0) < 0 and a from-zero interval exists at h0.
pub fn peaked_admissible(f: &Potential) -> Option<PeakedAdmissible> {
    let iv = from_zero_interval(f, f.h0())?;
    match iv.left_diag.zero_contact {
        ZeroContact::FiniteSlope(a) => Some(PeakedAdmissible {
            m: iv.right_end,
            a,
            solitary: iv.right_diag.endpoint_class == EndpointClass::Critical,
        }),
        _ => None,
    }
}

/// Compact-support family exists iff F'(0) = 0, F''(0) < 0 and a from-zero
/// interval exists at h0; front_mode distinguishes F'(m) = 0.
pub fn compacton_admissible(f: &Potential) -> Option<CompactonAdmissible> {
    let iv = from_zero_interval(f, f.h0())?;
    if iv.left_diag.zero_contact != ZeroContact::ZeroSlope || f.vanish_order_at_zero() != 2 {
        return None;
    }
    Some(CompactonAdmissible {
        m: iv.right_end,
        front_mode: iv.right_diag.endpoint_class == EndpointClass::Critical,
    })
}

/// Cusped waves exist iff h > h0 and F(u) < h on [0, m) with F(m) = h.
pub fn cusped_admissible(f: &Potential, h: f64) -> Option<CuspedAdmissible> {
    if h <= f.h0() + TOL_ENERGY * f.scale_at(0.0).max(h.abs()) {
        return None;
    }
    let iv = from_zero_interval(f, h)?;
    Some(CuspedAdmissible {
        m: iv.right_end,
        solitary: iv.right_diag.endpoint_class == EndpointClass::Critical,
    })
}

/// u == 0 solves the first-integral equation exactly when h = h0.
pub fn zero_solution_admissible(f: &Potential, h: f64) -> bool {
    f.is_h0(h)
}

fn smooth_period(f: &Potential, h: f64, iv: &BranchInterval) -> Option<f64> {
    let b = SpeedBranch::new(f, h, Sign::Plus);
    let t = transit_time(&b, iv.left_end, iv.right_end, QUAD_TOL).ok()?;
    (t.converged && t.value.is_finite()).then_some(2.0 * t.value)
}

fn degenerate_interval(f: &Potential, p: f64) -> BranchInterval {
    let diag = EndpointDiag {
        at: p,
        endpoint_class: EndpointClass::Critical,
        zero_contact: ZeroContact::None,
        finite_time: false,
    };
    let _ = f;
    BranchInterval {
        kind: IntervalKind::Interior,
        left_end: p,
        right_end: p,
        left_diag: diag,
        right_diag: diag,
    }
}

/// Every wave class supported at level h, over all branch intervals in
/// [0, u_max] plus the constant solutions. An empty vector means the level
/// carries no bounded waves.
pub fn classify_level(f: &Potential, h: f64) -> Vec<WaveClass> {
    let u_max = f.default_u_max(h);
    let mut out = Vec::new();

    let intervals = f.admissible_intervals(h, u_max).unwrap_or_default();

    for iv in intervals {
        match iv.kind {
            IntervalKind::Interior => out.extend(classify_interior(f, h, iv)),
            IntervalKind::FromZero => out.extend(classify_from_zero(f, h, iv)),
        }
    }

    // Constant solutions u == p at critical points with F(p) = h.
    if let Ok(crits) = f.extrema(0.0, u_max) {
        for cp in crits {
            if (cp.value - h).abs() <= TOL_ENERGY * f.scale_at(cp.location).max(h.abs()) {
                out.push(WaveClass {
                    tag: WaveTag::Constant,
                    interval: degenerate_interval(f, cp.location),
                    attributes: Attributes {
                        crest: Some(cp.location),
                        ..Attributes::default()
                    },
                });
            }
        }
    }

    out.sort_by(|a, b| {
        a.interval
            .left_end
            .partial_cmp(&b.interval.left_end)
            .unwrap()
            .then(a.tag.cmp(&b.tag))
    });
    out
}

fn classify_interior(f: &Potential, h: f64, iv: BranchInterval) -> Vec<WaveClass> {
    let (m1, m2) = (iv.left_end, iv.right_end);
    let left_critical = iv.left_diag.endpoint_class == EndpointClass::Critical;
    let right_critical = iv.right_diag.endpoint_class == EndpointClass::Critical;
    let class = match (left_critical, right_critical) {
        (false, false) => WaveClass {
            tag: WaveTag::SmoothPeriodic,
            interval: iv,
            attributes: Attributes {
                period: smooth_period(f, h, &iv),
                crest: Some(m2),
                trough: Some(m1),
                ..Attributes::default()
            },
        },
        (true, false) => WaveClass {
            tag: WaveTag::SmoothSolitaryMax,
            interval: iv,
            attributes: Attributes {
                crest: Some(m2),
                asymptote: Some(m1),
                ..Attributes::default()
            },
        },
        (false, true) => WaveClass {
            tag: WaveTag::SmoothSolitaryMin,
            interval: iv,
            attributes: Attributes {
                trough: Some(m1),
                asymptote: Some(m2),
                ..Attributes::default()
            },
        },
        (true, true) => WaveClass {
            tag: WaveTag::SmoothFront,
            interval: iv,
            attributes: Attributes {
                trough: Some(m1),
                crest: Some(m2),
                ..Attributes::default()
            },
        },
    };
    vec![class]
}

fn classify_from_zero(f: &Potential, h: f64, iv: BranchInterval) -> Vec<WaveClass> {
    let m = iv.right_end;
    let right_critical = iv.right_diag.endpoint_class == EndpointClass::Critical;

    if !f.is_h0(h) {
        // h > h0: cusped waves.
        let tag = if right_critical {
            WaveTag::CuspedSolitary
        } else {
            WaveTag::CuspedPeriodic
        };
        let mut attrs = Attributes::default();
        if right_critical {
            attrs.asymptote = Some(m);
        } else {
            attrs.period = period(f, m, PeriodMode::Cusped).ok();
            attrs.crest = Some(m);
        }
        return vec![WaveClass {
            tag,
            interval: iv,
            attributes: attrs,
        }];
    }

    match f.vanish_order_at_zero() {
        1 => {
            // F'(0) < 0 (guaranteed by the interval's existence): peaked.
            let a = match iv.left_diag.zero_contact {
                ZeroContact::FiniteSlope(a) => a,
                _ => (-2.0 * f.eval(0.0, 1)).max(0.0).sqrt(),
            };
            if right_critical {
                vec![WaveClass {
                    tag: WaveTag::PeakedSolitary,
                    interval: iv,
                    attributes: Attributes {
                        peak_slope: Some(a),
                        asymptote: Some(m),
                        ..Attributes::default()
                    },
                }]
            } else {
                vec![WaveClass {
                    tag: WaveTag::PeakedPeriodic,
                    interval: iv,
                    attributes: Attributes {
                        period: period(f, m, PeriodMode::Peaked).ok(),
                        peak_slope: Some(a),
                        crest: Some(m),
                        ..Attributes::default()
                    },
                }]
            }
        }
        2 => {
            // F''(0) < 0: compact-support family.
            if right_critical {
                // F'(m) = 0: fronts, plateaus, and the analytic solitary.
                vec![
                    WaveClass {
                        tag: WaveTag::FrontFiniteDecay,
                        interval: iv,
                        attributes: Attributes {
                            asymptote: Some(m),
                            ..Attributes::default()
                        },
                    },
                    WaveClass {
                        tag: WaveTag::Plateau,
                        interval: iv,
                        attributes: Attributes {
                            asymptote: Some(m),
                            ..Attributes::default()
                        },
                    },
                    WaveClass {
                        tag: WaveTag::SmoothSolitaryMin,
                        interval: iv,
                        attributes: Attributes {
                            trough: Some(0.0),
                            asymptote: Some(m),
                            ..Attributes::default()
                        },
                    },
                ]
            } else {
                let support = period(f, m, PeriodMode::CompactSupport).ok();
                vec![
                    WaveClass {
                        tag: WaveTag::Compacton,
                        interval: iv,
                        attributes: Attributes {
                            support,
                            crest: Some(m),
                            ..Attributes::default()
                        },
                    },
                    WaveClass {
                        tag: WaveTag::CompositeAdmissible,
                        interval: iv,
                        attributes: Attributes {
                            support,
                            crest: Some(m),
                            ..Attributes::default()
                        },
                    },
                ]
            }
        }
        _ => {
            // F'(0) = F''(0) = 0, F'''(0) != 0: the branch speed is
            // Lipschitz at u = 0 and no singular wave starts there.
            vec![WaveClass {
                tag: WaveTag::NoneSingular,
                interval: iv,
                attributes: Attributes::default(),
            }]
        }
    }
}

/// Critical energy levels of F: h0 = F(0) and the values at every real
/// extremum (the table row boundaries).
pub fn critical_levels(f: &Potential) -> Vec<f64> {
    let bound = f.poly().derivative().cauchy_root_bound();
    let mut levels = vec![f.h0()];
    if let Ok(crits) = f.extrema(-bound, bound) {
        levels.extend(crits.into_iter().map(|c| c.value));
    }
    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
    levels.dedup_by(|a, b| (*a - *b).abs() <= TOL_ENERGY * a.abs().max(1.0));
    levels
}

/// classify_level over a set of levels, with the critical levels h0 and
/// F(p_i) automatically inserted so sweeps align with case boundaries.
pub fn classify_sweep(f: &Potential, h_values: &[f64]) -> Vec<(f64, Vec<WaveClass>)> {
    let mut hs: Vec<f64> = h_values.to_vec();
    hs.extend(critical_levels(f));
    hs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    hs.dedup_by(|a, b| (*a - *b).abs() <= TOL_ENERGY * a.abs().max(1.0));
    crate::exec::par_map(&hs, |&h| (h, classify_level(f, h)))
}

/// Convenience result check used by property tests and the conjecture scan.
pub fn has_tag(classes: &[WaveClass], tag: WaveTag) -> bool {
    classes.iter().any(|c| c.tag == tag)
}
