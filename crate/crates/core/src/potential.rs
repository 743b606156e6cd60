//! Polynomial potentials F and the geometry of their sublevel sets on
//! [0, u_max]: evaluation, derivatives, shifted roots, extrema, and the
//! branch intervals on which bounded wave branches exist.

use crate::error::{Error, Result};
use crate::poly::{Poly, RootMult};
use crate::tol::{TOL_ENERGY, TOL_ROOT};

/// A polynomial potential F(u) = sum c_i u^i with degree >= 1.
///
/// Immutable after construction; every operation is a pure function.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    poly: Poly,
}

/// A zero of F' with its diagnosis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub location: f64,
    pub value: f64,
    /// Smallest n >= 1 with F^(n)(location) != 0. At a critical point this
    /// is at least 2.
    pub vanish_order: usize,
    pub kind: CritKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CritKind {
    LocalMin,
    LocalMax,
    Inflection,
}

/// Classification of a branch-interval endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EndpointClass {
    /// F'(at) != 0: the orbit passes in finite time.
    Regular,
    /// F'(at) == 0: a critical point of the planar system.
    Critical,
}

/// How the branch meets the singular line u = 0 (left end of a from-zero
/// interval); `None` for turning-point endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroContact {
    None,
    /// h = h0 and F'(0) < 0: the branch hits (0, +-a), a = sqrt(-2 F'(0)).
    FiniteSlope(f64),
    /// h = h0 and F'(0) = 0: the branch hits the origin.
    ZeroSlope,
    /// h > h0: the branch is unbounded in v as u -> 0+.
    InfiniteSlope,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EndpointDiag {
    pub at: f64,
    pub endpoint_class: EndpointClass,
    pub zero_contact: ZeroContact,
    /// Whether the transit time to this endpoint converges.
    pub finite_time: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalKind {
    /// (m1, m2) with 0 < m1: F(m1) = F(m2) = h, F < h in between.
    Interior,
    /// (0, m): F(m) = h and F < h on (0, m).
    FromZero,
}

/// A maximal u-interval on which the bounded branch pair v_h^{+-}(u) exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchInterval {
    pub kind: IntervalKind,
    pub left_end: f64,
    pub right_end: f64,
    pub left_diag: EndpointDiag,
    pub right_diag: EndpointDiag,
}

impl BranchInterval {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left_end + self.right_end)
    }
}

impl Potential {
    /// Builds a potential from ascending coefficients c0..cd. Trailing exact
    /// zeros are trimmed; constant polynomials are rejected because the wave
    /// equation degenerates.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPotential(
                "coefficients must be finite".into(),
            ));
        }
        let poly = Poly::new(coeffs);
        match poly.degree() {
            None | Some(0) => Err(Error::InvalidPotential(
                "degree must be at least 1 (constant F rejected)".into(),
            )),
            Some(_) => Ok(Potential { poly }),
        }
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn coeffs(&self) -> &[f64] {
        self.poly.coeffs()
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().expect("potential has degree >= 1")
    }

    /// h0 = F(0) = c0, exact.
    pub fn h0(&self) -> f64 {
        self.poly.coeff(0)
    }

    /// Value of F^(order)(u); order 0 is F itself. Total on the reals.
    pub fn eval(&self, u: f64, order: usize) -> f64 {
        self.poly.eval_deriv(u, order)
    }

    /// Magnitude scale max|c_i| * max(1, |u|)^d used to normalize tolerances.
    pub fn scale_at(&self, u: f64) -> f64 {
        self.poly.scale_at(u)
    }

    /// Smallest n >= 1 with F^(n)(0) != 0: the vanish order at the singular
    /// line, which governs finite-time arrival there.
    pub fn vanish_order_at_zero(&self) -> usize {
        self.poly
            .vanish_order_from(0.0, 1, TOL_ENERGY)
            .expect("nonconstant polynomial has a nonvanishing derivative")
    }

    /// Whether `h` equals the distinguished level h0 = F(0) up to the
    /// energy tolerance.
    pub fn is_h0(&self, h: f64) -> bool {
        (h - self.h0()).abs() <= TOL_ENERGY * self.scale_at(0.0).max(h.abs())
    }

    /// Sorted roots of F(u) = h in [lo, hi] with multiplicities.
    pub fn roots_shifted(&self, h: f64, lo: f64, hi: f64) -> Result<Vec<RootMult>> {
        if lo >= hi {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        let p = self.poly.sub_const(h);
        let roots = p.real_roots_in(lo, hi, TOL_ROOT)?;
        Ok(roots
            .into_iter()
            .map(|x| RootMult {
                x,
                multiplicity: p.root_multiplicity(x, 1e-9),
            })
            .collect())
    }

    /// All critical points of F in [lo, hi] with kind and vanish order.
    pub fn extrema(&self, lo: f64, hi: f64) -> Result<Vec<CriticalPoint>> {
        if lo >= hi {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        let dp = self.poly.derivative();
        if dp.degree().is_none() || dp.degree() == Some(0) {
            // F' is a nonzero constant: no critical points.
            return Ok(Vec::new());
        }
        let roots = dp.real_roots_in(lo, hi, TOL_ROOT)?;
        Ok(roots
            .into_iter()
            .map(|r| {
                let n = self
                    .poly
                    .vanish_order_from(r, 1, TOL_ENERGY)
                    .unwrap_or(self.degree());
                let kind = if n % 2 == 1 {
                    CritKind::Inflection
                } else if self.eval(r, n) > 0.0 {
                    CritKind::LocalMin
                } else {
                    CritKind::LocalMax
                };
                CriticalPoint {
                    location: r,
                    value: self.eval(r, 0),
                    vanish_order: n.max(2),
                    kind,
                }
            })
            .collect())
    }

    /// Search cap guaranteeing that all bounded branches on [0, inf) are
    /// found: one plus the Cauchy root bound of both F - h and F'.
    pub fn default_u_max(&self, h: f64) -> f64 {
        let b1 = self.poly.sub_const(h).cauchy_root_bound();
        let b2 = self.poly.derivative().cauchy_root_bound();
        1.0 + b1.max(b2)
    }

    /// Maximal disjoint intervals in [0, u_max] on which the branch pair
    /// v_h^{+-} exists and is bounded, with endpoint diagnoses. Empty when
    /// F >= h throughout.
    pub fn admissible_intervals(&self, h: f64, u_max: f64) -> Result<Vec<BranchInterval>> {
        if u_max <= 0.0 {
            return Err(Error::Domain("u_max must be positive".into()));
        }
        let p = self.poly.sub_const(h);
        let eps_x = 1e-9 * u_max.max(1.0);
        let mut roots: Vec<f64> = p
            .real_roots_in(0.0, u_max, TOL_ROOT)?
            .into_iter()
            .filter(|&r| r > eps_x)
            .collect();
        roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let mut out = Vec::new();

        // From-zero interval: F < h just right of 0 up to the first root.
        if let Some(&m) = roots.first() {
            let below_near_zero = if self.is_h0(h) {
                p.eval(0.5 * m.min(1.0)) < 0.0 && p.eval(0.5 * m) < 0.0
            } else {
                h > self.h0() // F(0) < h, so F < h on [0, m) up to the first root
            };
            if below_near_zero {
                out.push(BranchInterval {
                    kind: IntervalKind::FromZero,
                    left_end: 0.0,
                    right_end: m,
                    left_diag: self.zero_end_diag(h),
                    right_diag: self.turning_diag(&p, m),
                });
            }
        }

        // Interior intervals between consecutive roots where F < h.
        for w in roots.windows(2) {
            let (a, b) = (w[0], w[1]);
            if p.eval(0.5 * (a + b)) < 0.0 {
                out.push(BranchInterval {
                    kind: IntervalKind::Interior,
                    left_end: a,
                    right_end: b,
                    left_diag: self.turning_diag(&p, a),
                    right_diag: self.turning_diag(&p, b),
                });
            }
        }
        Ok(out)
    }

    fn zero_end_diag(&self, h: f64) -> EndpointDiag {
        let fp0 = self.eval(0.0, 1);
        let class = if fp0.abs() > TOL_ENERGY * self.scale_at(0.0) {
            EndpointClass::Regular
        } else {
            EndpointClass::Critical
        };
        if self.is_h0(h) {
            let n = self.vanish_order_at_zero();
            let (contact, finite) = match n {
                1 => (ZeroContact::FiniteSlope((-2.0 * fp0).sqrt()), true),
                2 => (ZeroContact::ZeroSlope, true),
                _ => (ZeroContact::ZeroSlope, false),
            };
            EndpointDiag {
                at: 0.0,
                endpoint_class: class,
                zero_contact: contact,
                finite_time: finite,
            }
        } else {
            EndpointDiag {
                at: 0.0,
                endpoint_class: class,
                zero_contact: ZeroContact::InfiniteSlope,
                finite_time: true,
            }
        }
    }

    fn turning_diag(&self, p: &Poly, m: f64) -> EndpointDiag {
        let mult = p.root_multiplicity(m, 1e-9);
        EndpointDiag {
            at: m,
            endpoint_class: if mult == 1 {
                EndpointClass::Regular
            } else {
                EndpointClass::Critical
            },
            zero_contact: ZeroContact::None,
            finite_time: mult == 1,
        }
    }
}
