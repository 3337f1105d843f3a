//! Rational test functions `f = Π (z - a_m)^{±mult}` given by their zeros and poles.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::log_plus;
use crate::ComplexPoint;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointKind {
    Zero,
    Pole,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroPole {
    #[serde(flatten)]
    pub location: Location,
    pub multiplicity: u32,
    pub kind: PointKind,
}

/// JSON shape of a location: `{"re": .., "im": ..}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub re: f64,
    pub im: f64,
}

impl ZeroPole {
    pub fn zero(a: ComplexPoint, multiplicity: u32) -> Self {
        ZeroPole { location: Location { re: a.re, im: a.im }, multiplicity, kind: PointKind::Zero }
    }

    pub fn pole(a: ComplexPoint, multiplicity: u32) -> Self {
        ZeroPole { location: Location { re: a.re, im: a.im }, multiplicity, kind: PointKind::Pole }
    }

    pub fn at(&self) -> ComplexPoint {
        ComplexPoint::new(self.location.re, self.location.im)
    }

    fn sign(&self) -> f64 {
        match self.kind {
            PointKind::Zero => 1.0,
            PointKind::Pole => -1.0,
        }
    }
}

/// Zeros and poles of a rational function, ordered by increasing modulus.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "ZeroPoleRecord")]
pub struct ZeroPoleData {
    points: Vec<ZeroPole>,
}

#[derive(Deserialize)]
struct ZeroPoleRecord {
    points: Vec<ZeroPole>,
}

impl TryFrom<ZeroPoleRecord> for ZeroPoleData {
    type Error = Error;
    fn try_from(rec: ZeroPoleRecord) -> Result<Self> {
        ZeroPoleData::new(rec.points)
    }
}

impl ZeroPoleData {
    pub fn new(mut points: Vec<ZeroPole>) -> Result<Self> {
        for p in &points {
            if p.multiplicity == 0 {
                return Err(Error::invalid("zero/pole multiplicity must be at least 1"));
            }
            if !(p.location.re.is_finite() && p.location.im.is_finite()) {
                return Err(Error::invalid("zero/pole location must be finite"));
            }
        }
        points.sort_by(|a, b| a.at().norm().total_cmp(&b.at().norm()));
        Ok(ZeroPoleData { points })
    }

    /// Simple zeros at the given points.
    pub fn from_zeros(zeros: &[ComplexPoint]) -> Result<Self> {
        Self::new(zeros.iter().map(|&a| ZeroPole::zero(a, 1)).collect())
    }

    /// Simple zeros and simple poles.
    pub fn from_parts(zeros: &[ComplexPoint], poles: &[ComplexPoint]) -> Result<Self> {
        let mut pts: Vec<ZeroPole> = zeros.iter().map(|&a| ZeroPole::zero(a, 1)).collect();
        pts.extend(poles.iter().map(|&a| ZeroPole::pole(a, 1)));
        Self::new(pts)
    }

    pub fn points(&self) -> &[ZeroPole] {
        &self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn total(&self, kind: PointKind) -> u64 {
        self.points.iter().filter(|p| p.kind == kind).map(|p| p.multiplicity as u64).sum()
    }

    /// Largest modulus of a zero or pole (0 when empty).
    pub fn max_modulus(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.at().norm())
    }

    /// Rejects data with a point on or outside the unit circle.
    pub fn check_inside_unit_disc(&self) -> Result<()> {
        match self.points.iter().find(|p| p.at().norm() >= 1.0) {
            Some(p) => Err(Error::invalid(format!("point {} lies outside the open unit disc", p.at()))),
            None => Ok(()),
        }
    }

    /// Locations repeated according to multiplicity, increasing modulus.
    pub fn expanded(&self) -> Vec<ComplexPoint> {
        self.points.iter().flat_map(|p| std::iter::repeat_n(p.at(), p.multiplicity as usize)).collect()
    }

    /// Number of zeros and poles with modulus `<= t`, counting multiplicity.
    pub fn count_within(&self, t: f64) -> u64 {
        self.points.iter().take_while(|p| p.at().norm() <= t).map(|p| p.multiplicity as u64).sum()
    }

    fn check_regular(&self, z: ComplexPoint) -> Result<()> {
        if self.points.iter().any(|p| p.at() == z) {
            return Err(Error::SingularPoint { re: z.re, im: z.im });
        }
        Ok(())
    }

    /// `log |f(z)|`.
    pub fn log_modulus(&self, z: ComplexPoint) -> Result<f64> {
        self.check_regular(z)?;
        Ok(self.points.iter().map(|p| p.sign() * p.multiplicity as f64 * (z - p.at()).norm().ln()).sum())
    }

    /// `L^{(i)}(z)` for the logarithmic derivative `L = f'/f = Σ ±mult/(z - a)`.
    fn log_derivative_power(&self, i: usize, z: ComplexPoint) -> ComplexPoint {
        let fact: f64 = (1..=i).map(|x| x as f64).product();
        let sgn = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut acc = Complex64::new(0.0, 0.0);
        for p in &self.points {
            let w = (z - p.at()).inv();
            acc += w.powi(i as i32 + 1) * (p.sign() * p.multiplicity as f64);
        }
        acc * (sgn * fact)
    }

    /// `Y_n = f^{(n)}/f` for `n = 0..=k` by `Y_{n+1} = Σ_i C(n,i) Y_{n-i} L^{(i)}`.
    fn ratio_chain(&self, k: usize, z: ComplexPoint) -> Vec<ComplexPoint> {
        let l: Vec<ComplexPoint> = (0..k).map(|i| self.log_derivative_power(i, z)).collect();
        let mut y = vec![Complex64::new(1.0, 0.0)];
        for n in 0..k {
            let mut next = Complex64::new(0.0, 0.0);
            let mut binom = 1.0;
            for i in 0..=n {
                next += y[n - i] * l[i] * binom;
                binom = binom * (n - i) as f64 / (i + 1) as f64;
            }
            y.push(next);
        }
        y
    }

    /// Numerator `N` and denominator `Q` of `f`, plus the squarefree pole polynomial `D`
    /// and `S = Q'D/Q = Σ mult_a Π_{b≠a} (z - b)`.
    fn polynomials(&self) -> (Poly, Poly, Poly, Poly) {
        let mut n = Poly::one();
        let mut q = Poly::one();
        let mut d = Poly::one();
        let poles: Vec<&ZeroPole> = self.points.iter().filter(|p| p.kind == PointKind::Pole).collect();
        for p in &self.points {
            let lin = Poly::linear(p.at());
            match p.kind {
                PointKind::Zero => (0..p.multiplicity).for_each(|_| n = n.mul(&lin)),
                PointKind::Pole => {
                    (0..p.multiplicity).for_each(|_| q = q.mul(&lin));
                    d = d.mul(&lin);
                }
            }
        }
        let mut s = Poly::zero();
        for (i, p) in poles.iter().enumerate() {
            let mut term = Poly::constant(Complex64::new(p.multiplicity as f64, 0.0));
            for (k, other) in poles.iter().enumerate() {
                if k != i {
                    term = term.mul(&Poly::linear(other.at()));
                }
            }
            s = s.add(&term);
        }
        (n, q, d, s)
    }

    /// Numerators `P_0..=P_k` with `f^{(n)} = P_n / (Q·D^n)`:
    /// `P_{n+1} = P_n'·D - P_n·(S + n·D')`.
    fn derivative_numerators(&self, k: usize) -> (Vec<Poly>, Poly) {
        let (n, _q, d, s) = self.polynomials();
        let dd = d.derivative();
        let mut ps = vec![n];
        for m in 0..k {
            let p = &ps[m];
            let next = p.derivative().mul(&d).sub(&p.mul(&s.add(&dd.scale(m as f64))));
            ps.push(next);
        }
        (ps, d)
    }

    /// Zeros and poles of `f^{(j)}`: zeros found numerically from the reduced
    /// numerator, each pole inherited with multiplicity `+ j`.
    pub fn derivative_data(&self, j: usize) -> Result<ZeroPoleData> {
        if j == 0 {
            return Ok(self.clone());
        }
        let (ps, _) = self.derivative_numerators(j);
        let pj = &ps[j];
        if pj.is_zero() {
            return Err(Error::invalid(format!("derivative of order {j} vanishes identically")));
        }
        let mut pts: Vec<ZeroPole> = pj.roots()?.into_iter().map(|a| ZeroPole::zero(a, 1)).collect();
        for p in self.points.iter().filter(|p| p.kind == PointKind::Pole) {
            pts.push(ZeroPole::pole(p.at(), p.multiplicity + j as u32));
        }
        ZeroPoleData::new(pts)
    }
}

/// `f^{(k)}(z)/f^{(j)}(z)`. The `j = 0` path sums partial fractions; `j > 0` divides
/// the explicit derivative numerators.
pub fn log_derivative(f: &ZeroPoleData, k: usize, j: usize, z: ComplexPoint) -> Result<ComplexPoint> {
    if k <= j {
        return Err(Error::invalid(format!("need k > j, got k = {k}, j = {j}")));
    }
    f.check_regular(z)?;
    let v = if j == 0 { f.ratio_chain(k, z)[k] } else { log_derivative_direct(f, k, j, z)? };
    finite_or_singular(v, z)
}

/// `f^{(k)}/f^{(j)} = P_k / (P_j·D^{k-j})` by polynomial differentiation.
pub fn log_derivative_direct(f: &ZeroPoleData, k: usize, j: usize, z: ComplexPoint) -> Result<ComplexPoint> {
    if k <= j {
        return Err(Error::invalid(format!("need k > j, got k = {k}, j = {j}")));
    }
    f.check_regular(z)?;
    let (ps, d) = f.derivative_numerators(k);
    let den = ps[j].eval(z) * d.eval(z).powi((k - j) as i32);
    if den == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularPoint { re: z.re, im: z.im });
    }
    finite_or_singular(ps[k].eval(z) / den, z)
}

/// `f^{(k)}/f^{(j)}` as a quotient of two recursive chains `(f^{(k)}/f)/(f^{(j)}/f)`.
pub fn log_derivative_recursive(f: &ZeroPoleData, k: usize, j: usize, z: ComplexPoint) -> Result<ComplexPoint> {
    if k <= j {
        return Err(Error::invalid(format!("need k > j, got k = {k}, j = {j}")));
    }
    f.check_regular(z)?;
    let y = f.ratio_chain(k, z);
    finite_or_singular(y[k] / y[j], z)
}

fn finite_or_singular(v: ComplexPoint, z: ComplexPoint) -> Result<ComplexPoint> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::SingularPoint { re: z.re, im: z.im })
    }
}

/// `n_j(t)`: zeros and poles of `f^{(j)}` in `|ζ| <= t`, counting multiplicity.
pub fn counting_function(f: &ZeroPoleData, j: usize, t: f64) -> Result<u64> {
    if !(t >= 0.0) {
        return Err(Error::invalid(format!("counting radius {t} must be nonnegative")));
    }
    Ok(f.derivative_data(j)?.count_within(t))
}

/// Plane characteristic of a rational function: `max(#zeros, #poles)·log⁺ r`.
pub fn characteristic_proxy(f: &ZeroPoleData, r: f64) -> f64 {
    f.total(PointKind::Zero).max(f.total(PointKind::Pole)) as f64 * log_plus(r)
}

/// Unit-disc characteristic proxy `max(N(r, 0), N(r, ∞), 0)` with
/// `N(r) = Σ_{0<|a|<r} mult·log(r/|a|) + n(0)·log r`.
pub fn characteristic_proxy_unit(f: &ZeroPoleData, r: f64) -> f64 {
    let integrated = |kind: PointKind| -> f64 {
        f.points
            .iter()
            .filter(|p| p.kind == kind)
            .map(|p| {
                let m = p.multiplicity as f64;
                let a = p.at().norm();
                if a == 0.0 {
                    m * r.ln()
                } else if a < r {
                    m * (r / a).ln()
                } else {
                    0.0
                }
            })
            .sum()
    };
    integrated(PointKind::Zero).max(integrated(PointKind::Pole)).max(0.0)
}

/// Dense polynomial with ascending complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn one() -> Self {
        Poly(vec![Complex64::new(1.0, 0.0)])
    }

    pub fn constant(c: Complex64) -> Self {
        Poly(vec![c]).trimmed()
    }

    /// `z - a`.
    pub fn linear(a: Complex64) -> Self {
        Poly(vec![-a, Complex64::new(1.0, 0.0)])
    }

    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Poly::one(), |p, &a| p.mul(&Poly::linear(a)))
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly((0..n).map(|i| *self.0.get(i).unwrap_or(&zero) + *other.0.get(i).unwrap_or(&zero)).collect()).trimmed()
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(-1.0))
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly(self.0.iter().map(|&c| c * s).collect()).trimmed()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            for (k, &b) in other.0.iter().enumerate() {
                out[i + k] += a * b;
            }
        }
        Poly(out).trimmed()
    }

    pub fn derivative(&self) -> Poly {
        Poly(self.0.iter().enumerate().skip(1).map(|(i, &c)| c * i as f64).collect()).trimmed()
    }

    /// All complex roots by Durand–Kerner iteration, polished by Newton steps.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        let Some(deg) = self.degree() else {
            return Err(Error::invalid("the zero polynomial has no isolated roots"));
        };
        if deg == 0 {
            return Ok(vec![]);
        }
        let lead = self.0[deg];
        let monic: Vec<Complex64> = self.0.iter().map(|&c| c / lead).collect();
        // Cauchy bound on the root moduli.
        let bound = 1.0 + monic[..deg].iter().map(|c| c.norm()).fold(0.0, f64::max);
        let seed = Complex64::new(0.4, 0.9);
        let scale = bound.min(1e150);
        let mut z: Vec<Complex64> = (0..deg).map(|i| seed.powi(i as i32) * scale / (1.0 + i as f64).sqrt()).collect();
        let p = Poly(monic);
        let mut converged = false;
        for _ in 0..2000 {
            let mut delta = 0.0f64;
            for i in 0..deg {
                let mut den = Complex64::new(1.0, 0.0);
                for k in 0..deg {
                    if k != i {
                        den *= z[i] - z[k];
                    }
                }
                if den == Complex64::new(0.0, 0.0) {
                    den = Complex64::new(1e-300, 0.0);
                }
                let step = p.eval(z[i]) / den;
                if step.re.is_finite() && step.im.is_finite() {
                    z[i] -= step;
                    delta = delta.max(step.norm() / (1.0 + z[i].norm()));
                }
            }
            if delta < 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged && z.iter().any(|r| p.eval(*r).norm() > 1e-6 * (1.0 + bound.powi(deg as i32))) {
            return Err(Error::Numeric(format!("root finder did not converge for degree {deg}")));
        }
        let dp = p.derivative();
        for r in z.iter_mut() {
            for _ in 0..3 {
                let d = dp.eval(*r);
                if d == Complex64::new(0.0, 0.0) {
                    break;
                }
                let step = p.eval(*r) / d;
                if !(step.re.is_finite() && step.im.is_finite()) || step.norm() > 1e-6 * (1.0 + r.norm()) {
                    break;
                }
                *r -= step;
            }
        }
        Ok(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn partial_fractions_for_z2_minus_1() {
        let f = ZeroPoleData::from_zeros(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let v = log_derivative(&f, 1, 0, c(3.0, 0.0)).unwrap();
        assert_relative_eq!(v.re, 0.75, epsilon = 1e-15);
        assert_eq!(v.im, 0.0);
    }

    #[test]
    fn identity_at_i() {
        let f = ZeroPoleData::from_zeros(&[c(0.0, 0.0)]).unwrap();
        let v = log_derivative(&f, 1, 0, c(0.0, 1.0)).unwrap();
        assert!((v - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn second_derivative_two_ways() {
        let f = ZeroPoleData::from_zeros(&[c(1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        let z = c(10.0, 0.0);
        let rec = log_derivative(&f, 2, 0, z).unwrap();
        let dir = log_derivative_direct(&f, 2, 0, z).unwrap();
        assert!((rec - dir).norm() <= 1e-12 * dir.norm());
        // f = z³ - 8z² + 17z - 10, f'' = 6z - 16.
        assert_relative_eq!(dir.re, 44.0 / 360.0, max_relative = 1e-14);
    }

    #[test]
    fn pole_derivatives_agree() {
        let f = ZeroPoleData::new(vec![
            ZeroPole::zero(c(1.0, 1.0), 2),
            ZeroPole::pole(c(-2.0, 0.5), 1),
            ZeroPole::pole(c(0.5, -3.0), 3),
            ZeroPole::zero(c(4.0, 0.0), 1),
        ])
        .unwrap();
        let z = c(7.0, 2.0);
        for (k, j) in [(1, 0), (2, 0), (3, 0), (2, 1), (3, 1), (4, 2)] {
            let a = log_derivative_recursive(&f, k, j, z).unwrap();
            let b = log_derivative_direct(&f, k, j, z).unwrap();
            assert!((a - b).norm() <= 1e-12 * b.norm(), "k={k} j={j}: {a} vs {b}");
        }
    }

    #[test]
    fn singular_point_rejected() {
        let f = ZeroPoleData::from_zeros(&[c(2.0, 0.0)]).unwrap();
        assert!(matches!(log_derivative(&f, 1, 0, c(2.0, 0.0)), Err(Error::SingularPoint { .. })));
        assert!(log_derivative(&f, 1, 1, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn counting_examples() {
        let f = ZeroPoleData::from_zeros(&[c(1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        assert_eq!(counting_function(&f, 0, 3.0).unwrap(), 2);
        assert_eq!(counting_function(&ZeroPoleData::default(), 0, 3.0).unwrap(), 0);
        let g = ZeroPoleData::new(vec![ZeroPole::zero(c(2.0, 0.0), 2)]).unwrap();
        assert_eq!(counting_function(&g, 0, 3.0).unwrap(), 2);
    }

    #[test]
    fn derivative_zeros_of_cubic() {
        // f = z³ - 8z² + 17z - 10, f' = 3z² - 16z + 17 with roots (8 ± √13)/3.
        let f = ZeroPoleData::from_zeros(&[c(1.0, 0.0), c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        let d = f.derivative_data(1).unwrap();
        let mut roots: Vec<f64> = d.points().iter().map(|p| p.at().re).collect();
        roots.sort_by(f64::total_cmp);
        let s = 13f64.sqrt();
        assert_relative_eq!(roots[0], (8.0 - s) / 3.0, max_relative = 1e-12);
        assert_relative_eq!(roots[1], (8.0 + s) / 3.0, max_relative = 1e-12);
        assert_eq!(counting_function(&f, 1, 2.0).unwrap(), 1);
    }

    #[test]
    fn pole_multiplicity_inherited() {
        // f = 1/(z - 1): f'' = 2/(z - 1)³, no zeros.
        let f = ZeroPoleData::new(vec![ZeroPole::pole(c(1.0, 0.0), 1)]).unwrap();
        let d = f.derivative_data(2).unwrap();
        assert_eq!(d.total(PointKind::Zero), 0);
        assert_eq!(d.total(PointKind::Pole), 3);
    }

    #[test]
    fn characteristic_examples() {
        let p = ZeroPoleData::from_zeros(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        assert_relative_eq!(characteristic_proxy(&p, 1f64.exp()), 3.0, epsilon = 1e-14);
        let q = ZeroPoleData::from_parts(&[], &[c(1.0, 0.0)]).unwrap();
        assert_relative_eq!(characteristic_proxy(&q, 2f64.exp()), 2.0, epsilon = 1e-14);
        let grid = crate::numeric::log_grid(1.0, 1e6, 50);
        assert!(grid.windows(2).all(|w| characteristic_proxy(&p, w[0]) <= characteristic_proxy(&p, w[1])));
    }

    #[test]
    fn unit_proxy_counts_zeros_inside() {
        let f = ZeroPoleData::from_zeros(&[c(0.5, 0.0)]).unwrap();
        assert_relative_eq!(characteristic_proxy_unit(&f, 0.9), (0.9f64 / 0.5).ln(), epsilon = 1e-15);
        assert_eq!(characteristic_proxy_unit(&f, 0.4), 0.0);
        let z = ZeroPoleData::from_zeros(&[c(0.0, 0.0)]).unwrap();
        assert_eq!(characteristic_proxy_unit(&z, 0.9), 0.0);
    }

    #[test]
    fn json_roundtrip_sorts() {
        let js = r#"{"points":[{"re":3.0,"im":0.0,"multiplicity":1,"kind":"zero"},{"re":0.5,"im":0.0,"multiplicity":2,"kind":"pole"}]}"#;
        let f: ZeroPoleData = serde_json::from_str(js).unwrap();
        assert_eq!(f.points()[0].kind, PointKind::Pole);
        let back: ZeroPoleData = serde_json::from_str(&serde_json::to_string(&f).unwrap()).unwrap();
        assert_eq!(back, f);
    }
}
