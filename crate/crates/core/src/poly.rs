//! Dense univariate polynomials over `f64` with derivative-chain real-root
//! isolation.
//!
//! Roots are isolated by recursing on the derivative: between consecutive
//! critical points the polynomial is strictly monotone, so every sign change
//! brackets exactly one root and plain bisection cannot miss it. Multiple
//! roots surface as critical points where the polynomial itself (nearly)
//! vanishes; their multiplicity is read off the lowest non-vanishing
//! derivative rather than from root clustering.

use crate::error::{Error, Result};

/// Coefficients in ascending order: `coeffs[i]` multiplies `u^i`.
/// The zero polynomial is the empty vector; otherwise the leading
/// coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

/// A real root with its multiplicity (vanish order of the polynomial).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootMult {
    pub x: f64,
    pub multiplicity: usize,
}

impl Poly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> f64 {
        self.coeffs.get(i).copied().unwrap_or(0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| i as f64 * c)
            .collect();
        Poly::new(coeffs)
    }

    /// `order`-th derivative (order 0 is the polynomial itself).
    pub fn derivative_n(&self, order: usize) -> Poly {
        let mut p = self.clone();
        for _ in 0..order {
            if p.is_zero() {
                break;
            }
            p = p.derivative();
        }
        p
    }

    /// Value of the `order`-th derivative at `x`.
    pub fn eval_deriv(&self, x: f64, order: usize) -> f64 {
        self.derivative_n(order).eval(x)
    }

    /// Antiderivative with constant term zero.
    pub fn antiderivative(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / (i as f64 + 1.0));
        }
        Poly::new(coeffs)
    }

    /// Taylor shift: returns q with q(x) = p(x + a).
    pub fn shift(&self, a: f64) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        // Repeated in-place synthetic division; O(d^2), exact enough for the
        // small degrees used here.
        let mut work = self.coeffs.clone();
        let n = work.len();
        for k in 0..n.saturating_sub(1) {
            for i in (k..n - 1).rev() {
                work[i] += a * work[i + 1];
            }
        }
        Poly::new(work)
    }

    pub fn scale(&self, k: f64) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// p(x) - c as a polynomial.
    pub fn sub_const(&self, c: f64) -> Poly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(-c);
        } else {
            coeffs[0] -= c;
        }
        Poly::new(coeffs)
    }

    /// Quotient of p by its root at x = 0, i.e. drops the constant term.
    /// The caller asserts that the constant term is (numerically) zero.
    pub fn deflate_zero(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(self.coeffs[1..].to_vec())
    }

    /// Synthetic division by (x - r): returns the quotient, discarding the
    /// remainder p(r) (callers use this only at numerically certified roots).
    pub fn deflate_at(&self, r: f64) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let n = self.coeffs.len();
        let mut q = vec![0.0; n - 1];
        let mut acc = self.coeffs[n - 1];
        for i in (1..n).rev() {
            q[i - 1] = acc;
            acc = acc * r + self.coeffs[i - 1];
        }
        Poly::new(q)
    }

    /// Magnitude scale of the polynomial near `x`:
    /// max|c_i| * max(1, |x|)^d. Used to make tolerances relative.
    pub fn scale_at(&self, x: f64) -> f64 {
        let maxc = self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let d = self.degree().unwrap_or(0) as i32;
        maxc * x.abs().max(1.0).powi(d)
    }

    /// Cauchy bound: all real roots lie in [-b, b].
    pub fn cauchy_root_bound(&self) -> f64 {
        match self.degree() {
            None | Some(0) => 1.0,
            Some(d) => {
                let lead = self.coeffs[d].abs();
                let m = self.coeffs[..d].iter().fold(0.0f64, |m, c| m.max(c.abs()));
                1.0 + m / lead
            }
        }
    }

    /// Smallest n >= `from` such that the n-th derivative does not vanish at
    /// `x` (relative tolerance per derivative). Returns `None` when every
    /// derivative up to the degree vanishes, i.e. the polynomial is zero.
    pub fn vanish_order_from(&self, x: f64, from: usize, rel_tol: f64) -> Option<usize> {
        let d = self.degree()?;
        let mut p = self.derivative_n(from);
        for n in from..=d {
            if p.is_zero() {
                return None;
            }
            let tol = rel_tol * p.scale_at(x);
            if p.eval(x).abs() > tol {
                return Some(n);
            }
            p = p.derivative();
        }
        None
    }

    /// Multiplicity of a (numerically certified) root at `x`.
    pub fn root_multiplicity(&self, x: f64, rel_tol: f64) -> usize {
        self.vanish_order_from(x, 0, rel_tol).unwrap_or(0).max(1)
    }

    /// All real roots in [lo, hi], sorted, each listed once regardless of
    /// multiplicity. Errors with [`Error::DegenerateRoots`] when the
    /// polynomial is identically zero.
    pub fn real_roots_in(&self, lo: f64, hi: f64, rel_tol: f64) -> Result<Vec<f64>> {
        if self.is_zero() {
            return Err(Error::DegenerateRoots);
        }
        if lo >= hi {
            return Err(Error::Domain(format!("empty interval [{lo}, {hi}]")));
        }
        Ok(self.roots_rec(lo, hi, rel_tol))
    }

    fn roots_rec(&self, lo: f64, hi: f64, rel_tol: f64) -> Vec<f64> {
        let d = match self.degree() {
            None | Some(0) => return Vec::new(),
            Some(d) => d,
        };
        if d == 1 {
            let r = -self.coeffs[0] / self.coeffs[1];
            if r >= lo && r <= hi {
                return vec![r];
            }
            return Vec::new();
        }

        let crits = self.derivative().roots_rec(lo, hi, rel_tol);
        let mut nodes = Vec::with_capacity(crits.len() + 2);
        nodes.push(lo);
        for &c in &crits {
            if c > lo && c < hi {
                nodes.push(c);
            }
        }
        nodes.push(hi);

        let mut roots = Vec::new();
        // Nodes which are themselves roots (multiple roots live at critical
        // points, interval endpoints may be exact roots).
        for &x in &nodes {
            if self.eval(x).abs() <= rel_tol * self.scale_at(x) {
                roots.push(x);
            }
        }
        // Strictly monotone segments: every sign change is one simple root.
        for w in nodes.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (fa, fb) = (self.eval(a), self.eval(b));
            let ta = rel_tol * self.scale_at(a);
            let tb = rel_tol * self.scale_at(b);
            if fa.abs() <= ta || fb.abs() <= tb {
                continue; // endpoint root already collected
            }
            if fa.signum() != fb.signum() {
                roots.push(self.bisect_root(a, b, fa));
            }
        }
        roots.sort_by(|p, q| p.partial_cmp(q).unwrap());
        // Merge clusters closer than resolution.
        let mut out: Vec<f64> = Vec::with_capacity(roots.len());
        for r in roots {
            match out.last() {
                Some(&prev) if (r - prev).abs() <= 1e-9 * r.abs().max(1.0) => {}
                _ => out.push(r),
            }
        }
        out
    }

    fn bisect_root(&self, mut a: f64, mut b: f64, fa: f64) -> f64 {
        let sa = fa.signum();
        for _ in 0..120 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            let fm = self.eval(mid);
            if fm == 0.0 {
                return mid;
            }
            if fm.signum() == sa {
                a = mid;
            } else {
                b = mid;
            }
        }
        let mut x = 0.5 * (a + b);
        // A couple of Newton polish steps; keep only while they improve.
        let dp = self.derivative();
        for _ in 0..3 {
            let f = self.eval(x);
            let df = dp.eval(x);
            if df == 0.0 {
                break;
            }
            let xn = x - f / df;
            if xn.is_finite() && xn >= a && xn <= b && self.eval(xn).abs() <= f.abs() {
                x = xn;
            } else {
                break;
            }
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_derivatives() {
        // p(u) = u^3 - u^2
        let p = Poly::new(vec![0.0, 0.0, -1.0, 1.0]);
        assert_eq!(p.eval(2.0), 4.0);
        assert_eq!(p.eval_deriv(0.0, 1), 0.0);
        assert_eq!(p.eval_deriv(0.0, 2), -2.0);
        assert_eq!(p.eval_deriv(0.0, 3), 6.0);
        assert!(p.derivative_n(4).is_zero());
    }

    #[test]
    fn shift_composes_correctly() {
        let p = Poly::new(vec![1.0, -2.0, 0.0, 3.0]);
        let q = p.shift(1.5);
        for &x in &[-2.0, -0.3, 0.0, 0.7, 2.2] {
            assert!((q.eval(x) - p.eval(x + 1.5)).abs() < 1e-12 * p.scale_at(x + 1.5));
        }
    }

    #[test]
    fn deflate_at_divides_out_root() {
        // (u - 1)^2 (u + 2) = u^3 - 3u + 2
        let p = Poly::new(vec![2.0, -3.0, 0.0, 1.0]);
        let q = p.deflate_at(1.0);
        // q = (u - 1)(u + 2) = u^2 + u - 2
        assert!((q.coeff(0) + 2.0).abs() < 1e-14);
        assert!((q.coeff(1) - 1.0).abs() < 1e-14);
        assert!((q.coeff(2) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn roots_simple_and_double() {
        // u(u - 1): roots 0, 1
        let p = Poly::new(vec![0.0, -1.0, 1.0]);
        let r = p.real_roots_in(0.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] - 0.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);

        // -(w/2)(w-1)^2 = -w/2 + w^2 - w^3/2: roots 0 (simple), 1 (double)
        let p = Poly::new(vec![0.0, -0.5, 1.0, -0.5]);
        let r = p.real_roots_in(0.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[1] - 1.0).abs() < 1e-9);
        assert_eq!(p.root_multiplicity(r[1], 1e-9), 2);
        assert_eq!(p.root_multiplicity(r[0], 1e-9), 1);
    }

    #[test]
    fn zero_poly_is_degenerate() {
        let p = Poly::new(vec![0.0, 0.0]);
        assert!(matches!(
            p.real_roots_in(0.0, 1.0, 1e-12),
            Err(Error::DegenerateRoots)
        ));
    }

    #[test]
    fn high_multiplicity_roots() {
        // (u - 1)^3: odd triple root, sign change at 1.
        let p = Poly::new(vec![-1.0, 3.0, -3.0, 1.0]);
        let r = p.real_roots_in(0.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).abs() < 1e-6);
        assert_eq!(p.root_multiplicity(r[0], 1e-7), 3);

        // (u - 1)^4: even quadruple root, no sign change.
        let p = Poly::new(vec![1.0, -4.0, 6.0, -4.0, 1.0]);
        let r = p.real_roots_in(0.0, 2.0, 1e-12).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).abs() < 1e-4);
        assert_eq!(p.root_multiplicity(r[0], 1e-5), 4);

        // u^2 (u - 1)^2: two double roots.
        let p = Poly::new(vec![0.0, 0.0, 1.0, -2.0, 1.0]);
        let r = p.real_roots_in(-0.5, 2.0, 1e-12).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(p.root_multiplicity(r[0], 1e-9), 2);
        assert_eq!(p.root_multiplicity(r[1], 1e-9), 2);
    }

    #[test]
    fn cauchy_bound_contains_roots() {
        let p = Poly::new(vec![-6.0, 11.0, -6.0, 1.0]); // (u-1)(u-2)(u-3)
        let b = p.cauchy_root_bound();
        assert!(b >= 3.0);
        let r = p.real_roots_in(-b, b, 1e-12).unwrap();
        assert_eq!(r.len(), 3);
    }
}
