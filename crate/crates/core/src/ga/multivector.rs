use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};

use super::{Blade, GaError, MAX_DIMENSION};

/// Coefficients with absolute value at or below this are not stored.
pub const PRUNE_EPSILON: f64 = 1e-12;

/// Default term-wise tolerance used by [`Multivector::approx_eq`].
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Sparse multivector over the Euclidean basis `σ_0 … σ_{N-1}`.
#[derive(Clone, PartialEq)]
pub struct Multivector {
    dim: usize,
    terms: BTreeMap<Blade, f64>,
}

impl Multivector {
    pub fn zero(dim: usize) -> Result<Self, GaError> {
        if dim > MAX_DIMENSION {
            return Err(GaError::DimensionTooLarge(dim));
        }
        Ok(Multivector {
            dim,
            terms: BTreeMap::new(),
        })
    }

    pub fn scalar(dim: usize, value: f64) -> Result<Self, GaError> {
        Multivector::from_terms(dim, [(Blade::SCALAR, value)])
    }

    /// `coeff · σ_index`.
    pub fn basis(dim: usize, index: usize, coeff: f64) -> Result<Self, GaError> {
        Multivector::from_terms(dim, [(Blade::vector(index)?, coeff)])
    }

    /// Grade-1 multivector from `(index, coefficient)` pairs. Repeated indices
    /// accumulate.
    pub fn vector<I>(dim: usize, coeffs: I) -> Result<Self, GaError>
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut terms = Vec::new();
        for (index, c) in coeffs {
            terms.push((Blade::vector(index)?, c));
        }
        Multivector::from_terms(dim, terms)
    }

    /// Sum of `coefficient · blade` terms. Fails if a blade does not fit in
    /// `dim` or a coefficient is not finite.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self, GaError>
    where
        I: IntoIterator<Item = (Blade, f64)>,
    {
        let mut mv = Multivector::zero(dim)?;
        for (blade, c) in terms {
            if !c.is_finite() {
                return Err(GaError::NonFinite);
            }
            if blade.min_dimension() > dim {
                return Err(GaError::IndexOutOfRange {
                    index: blade.min_dimension() - 1,
                    dimension: dim,
                });
            }
            *mv.terms.entry(blade).or_insert(0.0) += c;
        }
        mv.prune();
        Ok(mv)
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| c.abs() > PRUNE_EPSILON);
    }

    fn from_map(dim: usize, terms: BTreeMap<Blade, f64>) -> Self {
        let mut mv = Multivector { dim, terms };
        mv.prune();
        mv
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient of `blade`, zero if absent.
    pub fn get(&self, blade: Blade) -> f64 {
        self.terms.get(&blade).copied().unwrap_or(0.0)
    }

    /// Coefficient of the basis vector `σ_index`.
    pub fn coeff(&self, index: usize) -> f64 {
        Blade::vector(index).map(|b| self.get(b)).unwrap_or(0.0)
    }

    /// Stored terms in blade order (grade, then indices).
    pub fn terms(&self) -> impl Iterator<Item = (Blade, f64)> + '_ {
        self.terms.iter().map(|(b, c)| (*b, *c))
    }

    /// Number of stored (non-zero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scalar_part(&self) -> f64 {
        self.get(Blade::SCALAR)
    }

    /// True when every stored term has grade `k`. The zero multivector is
    /// homogeneous of every grade.
    pub fn is_grade(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == k)
    }

    fn check_dim(&self, other: &Multivector) -> Result<(), GaError> {
        if self.dim != other.dim {
            return Err(GaError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Multivector) -> Result<Multivector, GaError> {
        self.check_dim(other)?;
        let mut terms = self.terms.clone();
        for (b, c) in &other.terms {
            *terms.entry(*b).or_insert(0.0) += c;
        }
        Ok(Multivector::from_map(self.dim, terms))
    }

    pub fn try_sub(&self, other: &Multivector) -> Result<Multivector, GaError> {
        self.try_add(&-other)
    }

    pub fn scaled(&self, factor: f64) -> Multivector {
        let terms = self.terms.iter().map(|(b, c)| (*b, c * factor)).collect();
        Multivector::from_map(self.dim, terms)
    }

    pub fn geometric_product(&self, other: &Multivector) -> Result<Multivector, GaError> {
        self.check_dim(other)?;
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let (sign, blade) = a.product(*b);
                *terms.entry(blade).or_insert(0.0) += sign * ca * cb;
            }
        }
        Ok(Multivector::from_map(self.dim, terms))
    }

    /// Exterior (wedge) product. Blade pairs sharing a factor vanish, so for
    /// homogeneous grades r, s this is the grade r+s part of the geometric
    /// product.
    pub fn outer(&self, other: &Multivector) -> Result<Multivector, GaError> {
        self.check_dim(other)?;
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.mask() & b.mask() != 0 {
                    continue;
                }
                let (sign, blade) = a.product(*b);
                *terms.entry(blade).or_insert(0.0) += sign * ca * cb;
            }
        }
        Ok(Multivector::from_map(self.dim, terms))
    }

    /// Euclidean inner product `Σ α_i β_i` of two vectors.
    pub fn inner_vectors(&self, other: &Multivector) -> Result<f64, GaError> {
        self.check_dim(other)?;
        if !self.is_grade(1) || !other.is_grade(1) {
            return Err(GaError::NotVector);
        }
        Ok(self.terms.iter().map(|(b, c)| c * other.get(*b)).sum())
    }

    pub fn reverse(&self) -> Multivector {
        let terms = self
            .terms
            .iter()
            .map(|(b, c)| (*b, c * b.reverse_sign()))
            .collect();
        Multivector {
            dim: self.dim,
            terms,
        }
    }

    /// The grade-`k` part `⟨M⟩_k`.
    pub fn grade(&self, k: usize) -> Multivector {
        let terms = self
            .terms
            .iter()
            .filter(|(b, _)| b.grade() == k)
            .map(|(b, c)| (*b, *c))
            .collect();
        Multivector {
            dim: self.dim,
            terms,
        }
    }

    /// `⟨M† M⟩_0`. In a Euclidean algebra every blade satisfies `B† B = 1`,
    /// so this is the sum of squared coefficients.
    pub fn norm_squared(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// `a⁻¹ = a / ‖a‖²` for a non-zero vector.
    pub fn inverse_vector(&self) -> Result<Multivector, GaError> {
        if !self.is_grade(1) {
            return Err(GaError::NotVector);
        }
        let n2 = self.norm_squared();
        if n2 == 0.0 {
            return Err(GaError::NotInvertible("zero vector"));
        }
        Ok(self.scaled(1.0 / n2))
    }

    /// Inverse of `s + b σ_jk` (scalar plus at most one bivector blade):
    /// `Z† / ‖Z‖²`.
    pub fn inverse_spinor(&self) -> Result<Multivector, GaError> {
        let mut planes = 0;
        for b in self.terms.keys() {
            match b.grade() {
                0 => {}
                2 => planes += 1,
                _ => {
                    return Err(GaError::NotInvertible(
                        "not a scalar plus single-plane bivector",
                    ))
                }
            }
        }
        if planes > 1 {
            return Err(GaError::NotInvertible("bivector spans more than one plane"));
        }
        let n2 = self.norm_squared();
        if n2 == 0.0 {
            return Err(GaError::NotInvertible("zero spinor"));
        }
        Ok(self.reverse().scaled(1.0 / n2))
    }

    /// Left-multiplies `v` by the rotor `e^{angle·plane} = cos(angle) + sin(angle)·plane`.
    pub fn rotor_apply(plane: Blade, angle: f64, v: &Multivector) -> Result<Multivector, GaError> {
        if plane.grade() != 2 {
            return Err(GaError::NotBivector(plane.grade()));
        }
        let rotor =
            Multivector::from_terms(v.dim, [(Blade::SCALAR, angle.cos()), (plane, angle.sin())])?;
        rotor.geometric_product(v)
    }

    /// Term-wise comparison: every coefficient differs by at most `tol`.
    pub fn approx_eq(&self, other: &Multivector, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    /// Largest absolute coefficient difference over the union of blades.
    pub fn max_abs_diff(&self, other: &Multivector) -> f64 {
        let left = self.terms.iter().map(|(b, c)| (c - other.get(*b)).abs());
        let right = other
            .terms
            .iter()
            .filter(|(b, _)| !self.terms.contains_key(b))
            .map(|(_, c)| c.abs());
        left.chain(right).fold(0.0, f64::max)
    }
}

impl Neg for &Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        self.scaled(-1.0)
    }
}

impl Neg for Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        self.scaled(-1.0)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;

    fn mul(self, rhs: f64) -> Multivector {
        self.scaled(rhs)
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (b, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0.0 {
                "-"
            } else if n > 0 {
                "+"
            } else {
                ""
            };
            if n > 0 {
                f.write_str(" ")?;
            }
            if b.is_scalar() {
                write!(f, "{sign}{}", c.abs())?;
            } else {
                write!(f, "{sign}{}{b}", c.abs())?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[{}]({self})", self.dim)
    }
}
