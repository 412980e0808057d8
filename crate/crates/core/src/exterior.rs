//! Sparse exterior algebra over an `n`-dimensional real vector space.
//!
//! Forms use the determinant convention: `(e^i ∧ e^j)(X, Y) = e^i(X) e^j(Y) −
//! e^i(Y) e^j(X)`, with no `1/k!` factors. Generator indices are 1-based in
//! every public signature, matching Salamon notation; internally a basis
//! monomial is a bit set ([`Blade`]).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex;

use crate::error::{ensure_dim, Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Ring, Scalar};

/// Maximum supported ambient dimension (generator sets are stored as `u64`).
pub const MAX_DIM: usize = 64;

/// A basis monomial `e^{i_1} ∧ … ∧ e^{i_k}` with `i_1 < … < i_k`.
///
/// Ordered lexicographically on the increasing index tuple, so that for a
/// fixed degree the iteration order of a [`KForm`] is the standard basis order
/// of `Λ^k`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Blade(u64);

impl Blade {
    pub const EMPTY: Blade = Blade(0);

    /// From 1-based strictly increasing indices. Returns `None` on repeats.
    pub fn from_indices(indices: &[usize]) -> Option<(Blade, bool)> {
        let mut mask = 0u64;
        let mut negative = false;
        for &i in indices {
            assert!(
                (1..=MAX_DIM).contains(&i),
                "generator index {i} out of range"
            );
            let bit = 1u64 << (i - 1);
            if mask & bit != 0 {
                return None;
            }
            // moving e^i left past every larger index already present
            negative ^= (mask >> (i - 1)).count_ones() % 2 == 1;
            mask |= bit;
        }
        Some((Blade(mask), negative))
    }

    pub fn mask(self) -> u64 {
        self.0
    }

    pub fn from_mask(mask: u64) -> Blade {
        Blade(mask)
    }

    pub fn grade(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 1-based indices in increasing order.
    pub fn indices(self) -> Vec<usize> {
        (0..64)
            .filter(|b| self.0 >> b & 1 == 1)
            .map(|b| b + 1)
            .collect()
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> (index - 1) & 1 == 1
    }

    /// `self ∧ other = ± (self ∪ other)`; `None` if they share a generator.
    /// The flag is `true` when the sign is negative.
    pub fn wedge(self, other: Blade) -> Option<(Blade, bool)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        let mut inversions = 0u32;
        let mut b = other.0;
        while b != 0 {
            let j = b.trailing_zeros();
            inversions += (self.0 >> j).count_ones();
            b &= b - 1;
        }
        Some((Blade(self.0 | other.0), inversions % 2 == 1))
    }

    /// The top blade `e^{1…n}`.
    pub fn top(dim: usize) -> Blade {
        if dim == 64 {
            Blade(u64::MAX)
        } else {
            Blade((1u64 << dim) - 1)
        }
    }

    /// All blades of grade `k` in dimension `n`, lexicographic order.
    pub fn all(dim: usize, k: usize) -> Vec<Blade> {
        let mut out = Vec::new();
        let mut idx: Vec<usize> = (1..=k).collect();
        if k > dim {
            return out;
        }
        loop {
            out.push(Blade::from_indices(&idx).unwrap().0);
            // advance to the next k-subset
            let mut pos = k;
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if idx[pos] < dim - (k - 1 - pos) {
                    idx[pos] += 1;
                    for q in pos + 1..k {
                        idx[q] = idx[q - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    fn label(self, dim: usize) -> String {
        let idx = self.indices();
        if idx.is_empty() {
            return "1".into();
        }
        if dim <= 9 {
            let digits: String = idx.iter().map(|i| i.to_string()).collect();
            format!("e{digits}")
        } else {
            idx.iter()
                .map(|i| format!("e{i}"))
                .collect::<Vec<_>>()
                .join("^")
        }
    }
}

impl Ord for Blade {
    fn cmp(&self, other: &Self) -> Ordering {
        // the set containing the smallest differing index comes first
        other.0.reverse_bits().cmp(&self.0.reverse_bits())
    }
}

impl PartialOrd for Blade {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A homogeneous exterior form of fixed degree with exact coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct KForm<T> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Blade, T>,
}

impl<T: Ring> KForm<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        assert!(degree <= dim, "degree {degree} exceeds dimension {dim}");
        KForm {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Degree-0 form.
    pub fn constant(dim: usize, c: T) -> Self {
        let mut f = Self::zero(dim, 0);
        f.insert(Blade::EMPTY, c);
        f
    }

    /// `e^i`, 1-based.
    pub fn generator(dim: usize, i: usize) -> Self {
        Self::basis(dim, &[i])
    }

    /// `e^{i_1} ∧ … ∧ e^{i_k}` for arbitrary (not necessarily sorted) 1-based
    /// indices; repeated indices give zero.
    pub fn basis(dim: usize, indices: &[usize]) -> Self {
        assert!(
            indices.iter().all(|&i| (1..=dim).contains(&i)),
            "generator index out of range 1..={dim}"
        );
        let mut f = Self::zero(dim, indices.len());
        if let Some((b, neg)) = Blade::from_indices(indices) {
            f.insert(b, if neg { -T::one() } else { T::one() });
        }
        f
    }

    /// Build from `(indices, coefficient)` pairs; coefficients of equal blades
    /// are summed.
    pub fn from_terms<'a>(
        dim: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (&'a [usize], T)>,
    ) -> Self {
        let mut f = Self::zero(dim, degree);
        for (idx, c) in terms {
            assert_eq!(idx.len(), degree, "term degree mismatch");
            f = f + Self::basis(dim, idx).scale(c);
        }
        f
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, &T)> {
        self.terms.iter().map(|(b, c)| (*b, c))
    }

    pub fn coeff_blade(&self, b: Blade) -> T {
        self.terms.get(&b).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient of `e^{indices}` (any order, sign adjusted).
    pub fn coeff(&self, indices: &[usize]) -> T {
        match Blade::from_indices(indices) {
            Some((b, neg)) if b.grade() == self.degree => {
                let c = self.coeff_blade(b);
                if neg {
                    -c
                } else {
                    c
                }
            }
            _ => T::zero(),
        }
    }

    /// Coefficient of `e^{1…n}`.
    pub fn top_coefficient(&self) -> T {
        self.coeff_blade(Blade::top(self.dim))
    }

    /// Value of a degree-0 form.
    pub fn scalar_value(&self) -> T {
        self.coeff_blade(Blade::EMPTY)
    }

    fn insert(&mut self, b: Blade, c: T) {
        if c.is_zero() {
            self.terms.remove(&b);
        } else {
            self.terms.insert(b, c);
        }
    }

    fn accumulate(&mut self, b: Blade, c: T) {
        let cur = self.terms.remove(&b).unwrap_or_else(T::zero);
        self.insert(b, cur + c);
    }

    pub fn scale(&self, s: T) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        if s.is_zero() {
            return out;
        }
        for (b, c) in &self.terms {
            out.insert(*b, c.clone() * s.clone());
        }
        out
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> KForm<U> {
        let mut out = KForm::zero(self.dim, self.degree);
        for (b, c) in &self.terms {
            out.insert(*b, f(c));
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        ensure_dim(self.dim, other.dim)?;
        if self.degree != other.degree {
            return Err(Error::Degree(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.accumulate(*b, c.clone());
        }
        Ok(out)
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        ensure_dim(self.dim, other.dim)?;
        let degree = self.degree + other.degree;
        let mut out = KForm {
            dim: self.dim,
            degree: degree.min(self.dim),
            terms: BTreeMap::new(),
        };
        if degree > self.dim {
            return Ok(out);
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((ab, neg)) = a.wedge(*b) {
                    let c = ca.clone() * cb.clone();
                    out.accumulate(ab, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Exterior product. Panics on dimension mismatch; see [`KForm::try_wedge`].
    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other)
            .expect("wedge of forms of different dimension")
    }

    /// `self ∧ … ∧ self` (`k` factors); `k = 0` gives the constant 1.
    pub fn power(&self, k: usize) -> Self {
        (0..k).fold(Self::constant(self.dim, T::one()), |acc, _| acc.wedge(self))
    }

    /// Interior product `ι_v self`.
    pub fn try_contract(&self, v: &Vector<T>) -> Result<Self> {
        ensure_dim(self.dim, v.dim())?;
        if self.degree == 0 {
            return Err(Error::Degree("cannot contract a 0-form".into()));
        }
        let mut out = Self::zero(self.dim, self.degree - 1);
        for (b, c) in &self.terms {
            for (m, i) in b.indices().into_iter().enumerate() {
                let vi = &v.coeffs[i - 1];
                if vi.is_zero() {
                    continue;
                }
                let rest = Blade(b.0 & !(1u64 << (i - 1)));
                let t = c.clone() * vi.clone();
                out.accumulate(rest, if m % 2 == 1 { -t } else { t });
            }
        }
        Ok(out)
    }

    /// Interior product; panics on degree-0 input or dimension mismatch.
    pub fn contract(&self, v: &Vector<T>) -> Self {
        self.try_contract(v).expect("invalid contraction")
    }

    /// Multilinear evaluation `self(v_1, …, v_k)`.
    pub fn try_evaluate(&self, vs: &[Vector<T>]) -> Result<T> {
        if vs.len() != self.degree {
            return Err(Error::Degree(format!(
                "a {}-form takes {} arguments, got {}",
                self.degree,
                self.degree,
                vs.len()
            )));
        }
        let mut f = self.clone();
        for v in vs {
            f = f.try_contract(v)?;
        }
        Ok(f.scalar_value())
    }

    pub fn evaluate(&self, vs: &[Vector<T>]) -> T {
        self.try_evaluate(vs).expect("invalid evaluation")
    }

    /// Value on basis vectors `X_{i_1}, …` (1-based).
    pub fn evaluate_basis(&self, indices: &[usize]) -> T {
        self.coeff(indices)
    }

    /// Matrix `a(X_i, X_j)` of a 2-form.
    pub fn bilinear_matrix(&self) -> Matrix<T> {
        assert_eq!(self.degree, 2, "bilinear matrix of a non-2-form");
        let mut m = Matrix::zeros(self.dim, self.dim);
        for (b, c) in &self.terms {
            let idx = b.indices();
            let (i, j) = (idx[0] - 1, idx[1] - 1);
            m[(i, j)] = c.clone();
            m[(j, i)] = -c.clone();
        }
        m
    }

    /// Restriction along a linear map given by the images of a basis, without
    /// an independence check. The result lives in dimension `incl.len()`.
    pub fn pullback_unchecked(&self, incl: &[Vector<T>]) -> Self {
        let k = incl.len();
        let mut out = KForm::zero(k, self.degree.min(k));
        if self.degree > k {
            return out;
        }
        for b in Blade::all(k, self.degree) {
            let args: Vec<Vector<T>> = b.indices().iter().map(|&i| incl[i - 1].clone()).collect();
            out.insert(b, self.evaluate(&args));
        }
        out
    }
}

impl<T: Scalar> KForm<T> {
    /// Restriction to the subspace spanned by `incl`, expressed in the dual
    /// basis of `incl`.
    pub fn pullback(&self, incl: &[Vector<T>]) -> Result<Self> {
        for v in incl {
            ensure_dim(self.dim, v.dim())?;
        }
        if !independent(incl) {
            return Err(Error::Dependent);
        }
        Ok(self.pullback_unchecked(incl))
    }

    /// Hodge star with respect to `g`, with unit volume form
    /// `orientation · sqrt(det g) e^{1…n}`.
    ///
    /// Requires `det g` to be the square of a scalar; for rationals this means
    /// a perfect square, otherwise [`Error::UnsupportedMetric`].
    pub fn hodge_star(&self, g: &Metric<T>, orientation: i8) -> Result<Self> {
        ensure_dim(self.dim, g.dim())?;
        if orientation != 1 && orientation != -1 {
            return Err(Error::Invalid("orientation must be +1 or -1".into()));
        }
        if !g.is_positive_definite() {
            return Err(Error::DegenerateMetric);
        }
        let det = g.det();
        let root = det
            .sqrt_exact()
            .ok_or_else(|| Error::UnsupportedMetric(det.to_string()))?;
        let root = if orientation < 0 { -root } else { root };
        let ginv = g.inverse_matrix();
        let n = self.dim;
        let top = Blade::top(n);
        let mut out = Self::zero(n, n - self.degree);
        for b in Blade::all(n, self.degree) {
            let bi: Vec<usize> = b.indices().iter().map(|i| i - 1).collect();
            // <e^B, self>_g
            let mut inner = T::zero();
            for (c, coef) in &self.terms {
                let ci: Vec<usize> = c.indices().iter().map(|i| i - 1).collect();
                inner = inner + coef.clone() * ginv.select(&bi, &ci).det();
            }
            if inner.is_zero() {
                continue;
            }
            let comp = Blade(top.0 & !b.0);
            let (_, neg) = b.wedge(comp).expect("complement is disjoint");
            let v = inner * root.clone();
            out.accumulate(comp, if neg { -v } else { v });
        }
        Ok(out)
    }
}

/// Whether the vectors are linearly independent.
pub fn independent<T: Scalar>(vs: &[Vector<T>]) -> bool {
    if vs.is_empty() {
        return true;
    }
    let cols: Vec<Vec<T>> = vs.iter().map(|v| v.coeffs.clone()).collect();
    Matrix::from_columns(&cols).rank() == vs.len()
}

impl<T: Ring> Add for KForm<T> {
    type Output = KForm<T>;
    /// Panics on dimension or degree mismatch; see [`KForm::checked_add`].
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("invalid form addition")
    }
}

impl<T: Ring> Sub for KForm<T> {
    type Output = KForm<T>;
    fn sub(self, rhs: Self) -> Self {
        self.checked_add(&-rhs).expect("invalid form subtraction")
    }
}

impl<T: Ring> Neg for KForm<T> {
    type Output = KForm<T>;
    fn neg(self) -> Self {
        let mut out = self;
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }
}

/// Formats a coefficient-times-label term for display.
fn push_term(out: &mut String, coef: String, label: &str) {
    let (neg, body) = match coef.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, coef),
    };
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if label == "1" {
        out.push_str(&body);
    } else if body == "1" {
        out.push_str(label);
    } else if body.contains(['+', '-', ' ']) {
        out.push_str(&format!("({body})*{label}"));
    } else {
        out.push_str(&format!("{body}*{label}"));
    }
}

impl<T: Ring + fmt::Display> fmt::Display for KForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (b, c) in &self.terms {
            push_term(&mut s, c.to_string(), &b.label(self.dim));
        }
        f.write_str(&s)
    }
}

/// A complex form `re + i·im`.
#[derive(Clone, PartialEq, Debug)]
pub struct ComplexKForm<T> {
    pub re: KForm<T>,
    pub im: KForm<T>,
}

impl<T: Ring> ComplexKForm<T> {
    pub fn new(re: KForm<T>, im: KForm<T>) -> Result<Self> {
        ensure_dim(re.dim, im.dim)?;
        if re.degree != im.degree {
            return Err(Error::Degree(format!(
                "real part has degree {}, imaginary part {}",
                re.degree, im.degree
            )));
        }
        Ok(ComplexKForm { re, im })
    }

    pub fn from_real(re: KForm<T>) -> Self {
        let im = KForm::zero(re.dim, re.degree);
        ComplexKForm { re, im }
    }

    pub fn zero(dim: usize, degree: usize) -> Self {
        Self::from_real(KForm::zero(dim, degree))
    }

    pub fn dim(&self) -> usize {
        self.re.dim
    }

    pub fn degree(&self) -> usize {
        self.re.degree
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexKForm {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        let rr = self.re.try_wedge(&other.re)?;
        let ii = self.im.wedge(&other.im);
        let ri = self.re.wedge(&other.im);
        let ir = self.im.wedge(&other.re);
        Ok(ComplexKForm {
            re: rr - ii,
            im: ri + ir,
        })
    }

    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other)
            .expect("wedge of forms of different dimension")
    }

    /// Multiply by the complex scalar `z`.
    pub fn scale(&self, z: &Complex<T>) -> Self {
        ComplexKForm {
            re: self.re.scale(z.re.clone()) - self.im.scale(z.im.clone()),
            im: self.re.scale(z.im.clone()) + self.im.scale(z.re.clone()),
        }
    }

    pub fn contract(&self, v: &Vector<T>) -> Self {
        ComplexKForm {
            re: self.re.contract(v),
            im: self.im.contract(v),
        }
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> ComplexKForm<U> {
        ComplexKForm {
            re: self.re.map(&f),
            im: self.im.map(&f),
        }
    }

    pub fn top_coefficient(&self) -> Complex<T> {
        Complex::new(self.re.top_coefficient(), self.im.top_coefficient())
    }
}

impl<T: Scalar> ComplexKForm<T> {
    pub fn pullback(&self, incl: &[Vector<T>]) -> Result<Self> {
        Ok(ComplexKForm {
            re: self.re.pullback(incl)?,
            im: self.im.pullback(incl)?,
        })
    }
}

impl<T: Ring> Add for ComplexKForm<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        ComplexKForm {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<T: Ring> Sub for ComplexKForm<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        ComplexKForm {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<T: Ring + fmt::Display> fmt::Display for ComplexKForm<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "i*({})", self.im),
            (false, false) => write!(f, "{} + i*({})", self.re, self.im),
        }
    }
}

/// An element of the Lie algebra in the basis `X_1, …, X_n`.
#[derive(Clone, PartialEq, Debug)]
pub struct Vector<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> Vector<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Vector { coeffs }
    }

    pub fn zero(dim: usize) -> Self {
        Vector {
            coeffs: vec![T::zero(); dim],
        }
    }

    /// `X_i`, 1-based.
    pub fn basis(dim: usize, i: usize) -> Self {
        assert!(
            (1..=dim).contains(&i),
            "basis index {i} out of range 1..={dim}"
        );
        let mut v = Self::zero(dim);
        v.coeffs[i - 1] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coordinate along `X_i`, 1-based.
    pub fn get(&self, i: usize) -> T {
        self.coeffs[i - 1].clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: T) -> Self {
        Vector {
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Vector<U> {
        Vector {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

impl<T: Ring> Add for Vector<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            coeffs: self
                .coeffs
                .into_iter()
                .zip(rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl<T: Ring> Sub for Vector<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.dim(), rhs.dim(), "vector dimension mismatch");
        Vector {
            coeffs: self
                .coeffs
                .into_iter()
                .zip(rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl<T: Ring> Neg for Vector<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Vector {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Vector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                push_term(&mut s, c.to_string(), &format!("X{}", i + 1));
            }
        }
        if s.is_empty() {
            s.push('0');
        }
        f.write_str(&s)
    }
}

/// Linear endomorphism; column `j` is the image of `X_{j+1}`.
#[derive(Clone, PartialEq, Debug)]
pub struct Endo<T> {
    matrix: Matrix<T>,
}

impl<T: Ring> Endo<T> {
    pub fn from_matrix(matrix: Matrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Invalid("endomorphism matrix must be square".into()));
        }
        Ok(Endo { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Endo {
            matrix: Matrix::identity(dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Endo {
            matrix: Matrix::zeros(dim, dim),
        }
    }

    /// `J X_a = X_b`, `J X_b = −X_a` for each pair, zero elsewhere.
    pub fn from_pairs(dim: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut m = Matrix::zeros(dim, dim);
        let mut used = vec![false; dim + 1];
        for &(a, b) in pairs {
            for i in [a, b] {
                if !(1..=dim).contains(&i) {
                    return Err(Error::IndexOutOfRange { index: i, dim });
                }
                if used[i] {
                    return Err(Error::Invalid(format!("index {i} appears in two pairs")));
                }
                used[i] = true;
            }
            if a == b {
                return Err(Error::Invalid(format!("degenerate pair ({a},{b})")));
            }
            m[(b - 1, a - 1)] = T::one();
            m[(a - 1, b - 1)] = -T::one();
        }
        Ok(Endo { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        Vector::new(self.matrix.mul_vec(v.coeffs()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        Endo {
            matrix: self.matrix.mul(&other.matrix),
        }
    }

    /// Image of `X_i`, 1-based.
    pub fn image(&self, i: usize) -> Vector<T> {
        Vector::new(self.matrix.column(i - 1))
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Endo<U> {
        Endo {
            matrix: self.matrix.map(f),
        }
    }
}

impl<T: Scalar> Endo<T> {
    /// The same map written in the basis whose vectors are the columns of `p`.
    pub fn conjugate(&self, p: &Matrix<T>) -> Result<Self> {
        let inv = p.inverse().ok_or(Error::Dependent)?;
        Ok(Endo {
            matrix: inv.mul(&self.matrix).mul(p),
        })
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Endo<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

/// Symmetric bilinear form on the algebra.
#[derive(Clone, PartialEq, Debug)]
pub struct Metric<T> {
    matrix: Matrix<T>,
}

impl<T: Ring> Metric<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        if !matrix.is_symmetric() {
            return Err(Error::Invalid("metric matrix is not symmetric".into()));
        }
        Ok(Metric { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Metric {
            matrix: Matrix::identity(dim),
        }
    }

    pub fn diagonal(entries: Vec<T>) -> Self {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m[(i, i)] = e;
        }
        Metric { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn inner(&self, u: &Vector<T>, v: &Vector<T>) -> T {
        let mv = self.matrix.mul_vec(v.coeffs());
        u.coeffs()
            .iter()
            .zip(mv)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    /// Gram matrix `g(v_a, v_b)` of a family of vectors.
    pub fn gram(&self, vs: &[Vector<T>]) -> Matrix<T> {
        Matrix::from_fn(vs.len(), vs.len(), |a, b| self.inner(&vs[a], &vs[b]))
    }

    /// The 1-form `g(v, ·)`.
    pub fn flat(&self, v: &Vector<T>) -> KForm<T> {
        let n = self.dim();
        let row = self.matrix.transpose().mul_vec(v.coeffs());
        let mut f = KForm::zero(n, 1);
        for (i, c) in row.into_iter().enumerate() {
            f = f + KForm::generator(n, i + 1).scale(c);
        }
        f
    }
}

impl<T: Scalar> Metric<T> {
    pub fn is_positive_definite(&self) -> bool {
        self.matrix.is_positive_definite()
    }

    pub fn det(&self) -> T {
        self.matrix.det()
    }

    /// Inverse matrix; panics if degenerate.
    pub fn inverse_matrix(&self) -> Matrix<T> {
        self.matrix.inverse().expect("degenerate metric")
    }
}

impl<T: Ring + fmt::Display> fmt::Display for Metric<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.matrix)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type F = KForm<Rational>;
    type V = Vector<Rational>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn e(dim: usize, idx: &[usize]) -> F {
        F::basis(dim, idx)
    }

    #[test]
    fn blade_order_is_lexicographic() {
        let all = Blade::all(4, 2);
        let labels: Vec<Vec<usize>> = all.iter().map(|b| b.indices()).collect();
        assert_eq!(
            labels,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
        assert_eq!(Blade::all(3, 0), vec![Blade::EMPTY]);
        assert_eq!(Blade::all(2, 3), vec![]);
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(e(2, &[1]).wedge(&e(2, &[2])), e(2, &[1, 2]));
        assert_eq!(e(2, &[2]).wedge(&e(2, &[1])), -e(2, &[1, 2]));
        let kappa = e(5, &[1, 2]) + e(5, &[3, 4]);
        assert_eq!(kappa.wedge(&kappa), e(5, &[1, 2, 3, 4]).scale(q(2, 1)));
        assert_eq!(e(3, &[1]).wedge(&e(3, &[1])), F::zero(3, 2));
    }

    #[test]
    fn complex_wedge_example() {
        let a = ComplexKForm::new(e(2, &[1]), e(2, &[2])).unwrap();
        let prod = a.wedge(&a.conj());
        assert!(prod.re.is_zero());
        assert_eq!(prod.im, e(2, &[1, 2]).scale(q(-2, 1)));
    }

    #[test]
    fn contract_examples() {
        let kappa = e(5, &[1, 2]) + e(5, &[3, 4]);
        assert_eq!(kappa.contract(&V::basis(5, 1)), e(5, &[2]));
        assert_eq!(e(5, &[1, 2]).contract(&V::basis(5, 2)), -e(5, &[1]));
        assert!(e(5, &[1, 2]).contract(&V::basis(5, 5)).is_zero());
        assert!(F::constant(3, q(1, 1))
            .try_contract(&V::basis(3, 1))
            .is_err());
    }

    #[test]
    fn evaluate_examples() {
        let x1 = V::basis(2, 1);
        let x2 = V::basis(2, 2);
        assert_eq!(e(2, &[1, 2]).evaluate(&[x1.clone(), x2.clone()]), q(1, 1));
        assert_eq!(e(2, &[1, 2]).evaluate(&[x2, x1.clone()]), q(-1, 1));
        assert_eq!(
            e(3, &[3]).scale(q(2, 1)).evaluate(&[V::basis(3, 3)]),
            q(2, 1)
        );
        assert!(e(2, &[1, 2]).try_evaluate(&[x1]).is_err());
    }

    #[test]
    fn hodge_examples() {
        let g3 = Metric::<Rational>::identity(3);
        assert_eq!(e(3, &[1]).hodge_star(&g3, 1).unwrap(), e(3, &[2, 3]));
        let g2 = Metric::<Rational>::identity(2);
        assert_eq!(e(2, &[1]).hodge_star(&g2, 1).unwrap(), e(2, &[2]));
        assert_eq!(e(2, &[2]).hodge_star(&g2, 1).unwrap(), -e(2, &[1]));
        let g1 = Metric::<Rational>::identity(1);
        assert_eq!(
            e(1, &[1]).hodge_star(&g1, 1).unwrap(),
            F::constant(1, q(1, 1))
        );
        assert_eq!(
            F::constant(1, q(1, 1)).hodge_star(&g1, -1).unwrap(),
            -e(1, &[1])
        );
    }

    #[test]
    fn hodge_rejects_bad_metrics() {
        let g = Metric::diagonal(vec![q(2, 1), q(1, 1)]);
        assert!(matches!(
            e(2, &[1]).hodge_star(&g, 1),
            Err(Error::UnsupportedMetric(_))
        ));
        let g = Metric::diagonal(vec![q(-1, 1), q(1, 1)]);
        assert_eq!(e(2, &[1]).hodge_star(&g, 1), Err(Error::DegenerateMetric));
        // non-identity metric with square determinant
        let g = Metric::diagonal(vec![q(1, 1), q(4, 1)]);
        assert_eq!(
            e(2, &[1]).hodge_star(&g, 1).unwrap(),
            e(2, &[2]).scale(q(2, 1))
        );
        assert_eq!(
            e(2, &[2]).hodge_star(&g, 1).unwrap(),
            e(2, &[1]).scale(q(-1, 2))
        );
    }

    #[test]
    fn pullback_examples() {
        let x1 = V::basis(3, 1);
        assert!(e(3, &[3])
            .pullback(std::slice::from_ref(&x1))
            .unwrap()
            .is_zero());
        assert_eq!(
            e(3, &[1]).pullback(std::slice::from_ref(&x1)).unwrap(),
            e(1, &[1])
        );
        let im = e(5, &[1, 4]) + e(5, &[2, 3]);
        let sub = [V::basis(5, 1), V::basis(5, 3)];
        assert!(im.pullback(&sub).unwrap().is_zero());
        let re = e(5, &[1, 3]) - e(5, &[2, 4]);
        assert_eq!(re.pullback(&sub).unwrap(), e(2, &[1, 2]));
        assert_eq!(
            e(3, &[1]).pullback(&[x1.clone(), x1]),
            Err(Error::Dependent)
        );
    }

    #[test]
    fn display_forms() {
        let f = e(5, &[1, 2]).scale(q(2, 1)) - e(5, &[3, 4]).scale(q(1, 2));
        assert_eq!(f.to_string(), "2*e12 - 1/2*e34");
        assert_eq!(F::zero(3, 2).to_string(), "0");
        assert_eq!(V::basis(3, 3).scale(q(1, 2)).to_string(), "1/2*X3");
        assert_eq!(e(10, &[1, 10]).to_string(), "e1^e10");
    }

    #[test]
    fn pairs_endomorphism() {
        let j = Endo::<Rational>::from_pairs(3, &[(1, 2)]).unwrap();
        assert_eq!(j.apply(&V::basis(3, 1)), V::basis(3, 2));
        assert_eq!(j.apply(&V::basis(3, 2)), -V::basis(3, 1));
        assert!(j.apply(&V::basis(3, 3)).is_zero());
        assert!(Endo::<Rational>::from_pairs(3, &[(1, 2), (2, 3)]).is_err());
        assert!(Endo::<Rational>::from_pairs(3, &[(1, 4)]).is_err());
    }
}
