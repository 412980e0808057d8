//! Special Legendrian subalgebras, sampled comass of `Re ε`, and the
//! cohomological obstruction to extending a special Legendrian along a family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cealg::LieAlgebra;
use crate::error::{ensure_dim, Error, Result};
use crate::exterior::{independent, ComplexKForm, KForm, Metric, Vector};
use crate::presets::CcyData;
use crate::scalar::Scalar;
use crate::structures::{CcyStructure, Normalization};
use num_complex::Complex;

/// Invariant model of a submanifold: a subspace of the algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct Subalgebra<T> {
    parent: LieAlgebra<T>,
    basis: Vec<Vector<T>>,
    structure: Option<LieAlgebra<T>>,
}

impl<T: Scalar> Subalgebra<T> {
    /// Fails on dependent vectors; a subspace that is not closed under the
    /// bracket is accepted and flagged.
    pub fn new(parent: &LieAlgebra<T>, basis: Vec<Vector<T>>) -> Result<Self> {
        for v in &basis {
            ensure_dim(parent.dim(), v.dim())?;
        }
        if !independent(&basis) {
            return Err(Error::Dependent);
        }
        let structure = parent.subalgebra(&basis)?;
        Ok(Subalgebra {
            parent: parent.clone(),
            basis,
            structure,
        })
    }

    pub fn basis(&self) -> &[Vector<T>] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn parent(&self) -> &LieAlgebra<T> {
        &self.parent
    }

    pub fn is_closed_under_bracket(&self) -> bool {
        self.structure.is_some()
    }

    /// Structure constants in the given basis, if closed under the bracket.
    pub fn structure(&self) -> Option<&LieAlgebra<T>> {
        self.structure.as_ref()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LegendrianVerdict {
    NotLegendrian,
    LegendrianOnly,
    SpecialLegendrian,
}

impl std::fmt::Display for LegendrianVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            LegendrianVerdict::NotLegendrian => "NotLegendrian",
            LegendrianVerdict::LegendrianOnly => "LegendrianOnly",
            LegendrianVerdict::SpecialLegendrian => "SpecialLegendrian",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LegendrianReport<T> {
    pub verdict: LegendrianVerdict,
    pub integrable: bool,
    pub alpha: Vec<KForm<T>>,
    pub dalpha: KForm<T>,
    pub re_epsilon: KForm<T>,
    pub im_epsilon: KForm<T>,
    /// `det` of the induced metric on the given basis.
    pub volume_squared: T,
    /// `+1` or `−1` for the orientation making `p*(Re ε)` positive, `0` if it vanishes.
    pub orientation: i8,
    /// `p*(Re ε)` equals the induced unit volume form for that orientation.
    pub calibrated: bool,
}

fn legendrian_core<T: Scalar>(
    sub: &Subalgebra<T>,
    alphas: &[KForm<T>],
    epsilon: &ComplexKForm<T>,
    g: &Metric<T>,
    n: usize,
) -> Result<LegendrianReport<T>> {
    if sub.dim() != n {
        return Err(Error::Invalid(format!(
            "a Legendrian subspace has dimension {n}, got {}",
            sub.dim()
        )));
    }
    let b = sub.basis();
    let pulled: Vec<KForm<T>> = alphas
        .iter()
        .map(|a| a.pullback(b))
        .collect::<Result<_>>()?;
    let dalpha = sub.parent.differential(&alphas[0]).pullback(b)?;
    let pe = epsilon.pullback(b)?;
    let vol2 = g.gram(b).det();
    let c = pe.re.top_coefficient();
    let orientation = if c.is_positive() {
        1
    } else if c.is_negative() {
        -1
    } else {
        0
    };
    let calibrated = orientation != 0 && c.clone() * c == vol2;
    let legendrian = pulled.iter().all(KForm::is_zero) && dalpha.is_zero();
    let verdict = if !legendrian {
        LegendrianVerdict::NotLegendrian
    } else if pe.im.is_zero() && calibrated {
        LegendrianVerdict::SpecialLegendrian
    } else {
        LegendrianVerdict::LegendrianOnly
    };
    Ok(LegendrianReport {
        verdict,
        integrable: sub.is_closed_under_bracket(),
        alpha: pulled,
        dalpha,
        re_epsilon: pe.re,
        im_epsilon: pe.im,
        volume_squared: vol2,
        orientation,
        calibrated,
    })
}

/// Classify a subspace of dimension `n` against a CCY structure.
pub fn check_special_legendrian<T: Scalar>(
    sub: &Subalgebra<T>,
    ccy: &CcyStructure<T>,
) -> Result<LegendrianReport<T>> {
    ensure_dim(ccy.algebra().dim(), sub.parent.dim())?;
    legendrian_core(
        sub,
        std::slice::from_ref(ccy.contact().alpha()),
        ccy.epsilon(),
        &ccy.metric(),
        ccy.contact().n(),
    )
}

/// Same for an r-contact CY structure, with metric `g_J + Σ α_i⊗α_i`.
pub fn check_special_legendrian_r<T: Scalar>(
    sub: &Subalgebra<T>,
    s: &crate::structures::RContactCcyStructure<T>,
) -> Result<LegendrianReport<T>> {
    let alphas = s.contact().alphas();
    let dim = s.contact().algebra().dim();
    ensure_dim(dim, sub.parent.dim())?;
    let mut m = s.g_j().clone();
    for a in alphas {
        m = m.add(&crate::linalg::Matrix::from_fn(dim, dim, |i, k| {
            a.coeff(&[i + 1]) * a.coeff(&[k + 1])
        }));
    }
    let g = Metric::new(m)?;
    legendrian_core(sub, alphas, s.epsilon(), &g, s.contact().n())
}

/// Exact `Re ε(v_1, …, v_n)` on a `g`-orthonormal frame.
pub fn comass_probe<T: Scalar>(ccy: &CcyStructure<T>, frame: &[Vector<T>]) -> Result<T> {
    let n = ccy.contact().n();
    if frame.len() != n {
        return Err(Error::Invalid(format!("frame must have {n} vectors")));
    }
    for v in frame {
        ensure_dim(ccy.algebra().dim(), v.dim())?;
    }
    let g = ccy.metric();
    let gram = g.gram(frame);
    if gram != crate::linalg::Matrix::identity(n) {
        return Err(Error::Invalid(format!(
            "frame is not g-orthonormal: Gram matrix {gram}"
        )));
    }
    ccy.epsilon().re.try_evaluate(frame)
}

/// Largest `|Re ε|` over random `g`-orthonormal frames (floating point).
#[derive(Clone, Debug, PartialEq)]
pub struct ComassSample {
    pub max: f64,
    pub samples: usize,
    pub seed: u64,
}

const CHUNK: usize = 4096;

/// Monte Carlo comass estimate. Frames are drawn in fixed-size chunks, each
/// with its own generator derived from `seed`, so the result does not
/// depend on `jobs`.
pub fn comass_sample<T: Scalar>(
    ccy: &CcyStructure<T>,
    samples: usize,
    seed: u64,
    jobs: usize,
) -> ComassSample {
    let dim = ccy.algebra().dim();
    let n = ccy.contact().n();
    let g: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|k| ccy.metric().matrix()[(i, k)].to_f64())
                .collect()
        })
        .collect();
    let terms: Vec<(Vec<usize>, f64)> = ccy
        .epsilon()
        .re
        .terms()
        .map(|(b, c)| (b.indices().iter().map(|i| i - 1).collect(), c.to_f64()))
        .collect();
    let chunks = samples.div_ceil(CHUNK);
    let jobs = jobs.max(1).min(chunks.max(1));
    let run_chunk = |c: usize| -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let count = CHUNK.min(samples - c * CHUNK);
        let mut best = 0.0f64;
        let mut frame = vec![vec![0.0; dim]; n];
        for _ in 0..count {
            if !random_orthonormal_frame(&mut rng, &g, &mut frame) {
                continue;
            }
            let v = eval_top(&terms, &frame).abs();
            if v > best {
                best = v;
            }
        }
        best
    };
    let max = std::thread::scope(|s| {
        let handles: Vec<_> = (0..jobs)
            .map(|w| {
                let run_chunk = &run_chunk;
                s.spawn(move || {
                    (w..chunks)
                        .step_by(jobs)
                        .map(run_chunk)
                        .fold(0.0f64, f64::max)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap())
            .fold(0.0f64, f64::max)
    });
    ComassSample { max, samples, seed }
}

fn inner(g: &[Vec<f64>], u: &[f64], v: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, ui) in u.iter().enumerate() {
        for (k, vk) in v.iter().enumerate() {
            s += ui * g[i][k] * vk;
        }
    }
    s
}

fn random_orthonormal_frame(rng: &mut ChaCha8Rng, g: &[Vec<f64>], frame: &mut [Vec<f64>]) -> bool {
    let dim = g.len();
    for a in 0..frame.len() {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for fb in &frame[..a] {
            let p = inner(g, &v, fb);
            for (x, y) in v.iter_mut().zip(fb) {
                *x -= p * y;
            }
        }
        let norm = inner(g, &v, &v).sqrt();
        if norm < 1e-6 {
            return false;
        }
        for (x, y) in frame[a].iter_mut().zip(&v) {
            *x = y / norm;
        }
    }
    true
}

/// `φ(v_1, …, v_n) = Σ_I c_I det(v_a[I_b])`.
fn eval_top(terms: &[(Vec<usize>, f64)], frame: &[Vec<f64>]) -> f64 {
    let n = frame.len();
    let mut m = vec![vec![0.0; n]; n];
    terms
        .iter()
        .map(|(idx, c)| {
            for a in 0..n {
                for b in 0..n {
                    m[a][b] = frame[a][idx[b]];
                }
            }
            c * det_f64(&mut m)
        })
        .sum()
}

fn det_f64(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[piv][col] == 0.0 {
            return 0.0;
        }
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        det *= m[col][col];
        let (top, rest) = m.split_at_mut(col + 1);
        let pivot = &top[col];
        for row in rest.iter_mut().take(n - col - 1) {
            let f = row[col] / pivot[col];
            for (x, y) in row[col..n].iter_mut().zip(&pivot[col..n]) {
                *x -= f * y;
            }
        }
    }
    det
}

/// CCY data sampled at parameters `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec<T> {
    pub samples: Vec<(T, CcyData<T>)>,
}

impl<T: Scalar> FamilySpec<T> {
    pub fn constant(base: &CcyData<T>, ts: &[T]) -> Self {
        FamilySpec {
            samples: ts.iter().map(|t| (t.clone(), base.clone())).collect(),
        }
    }

    /// `ε_t = (cos t + i sin t) ε` at rational points `(t, cos t, sin t)` of the
    /// unit circle.
    pub fn rotation(base: &CcyData<T>, points: &[(T, T, T)]) -> Result<Self> {
        let samples = points
            .iter()
            .map(|(t, c, s)| {
                if c.clone() * c.clone() + s.clone() * s.clone() != T::one() {
                    return Err(Error::Invalid(format!(
                        "({c}, {s}) is not on the unit circle"
                    )));
                }
                let mut d = base.clone();
                d.epsilon = base.epsilon.scale(&Complex::new(c.clone(), s.clone()));
                Ok((t.clone(), d))
            })
            .collect::<Result<_>>()?;
        Ok(FamilySpec { samples })
    }

    /// Rotation through the rational points `((1−t²)/(1+t²), 2t/(1+t²))`.
    pub fn pythagorean(base: &CcyData<T>, ts: &[T]) -> Self {
        let points: Vec<(T, T, T)> = ts
            .iter()
            .map(|t| {
                let t2 = t.clone() * t.clone();
                let den = T::one() + t2.clone();
                let two_t = t.clone() + t.clone();
                (t.clone(), (T::one() - t2) / den.clone(), two_t / den)
            })
            .collect();
        Self::rotation(base, &points).expect("points lie on the unit circle")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionSample<T> {
    pub t: T,
    /// `p*(Im ε_t)` on the subalgebra.
    pub pullback: KForm<T>,
    /// A primitive when the class vanishes.
    pub primitive: Option<KForm<T>>,
}

impl<T> ObstructionSample<T> {
    pub fn class_is_zero(&self) -> bool {
        self.primitive.is_some()
    }
}

/// Per-sample class `[p*(Im ε_t)]` in the subalgebra's cohomology. The
/// subspace must be a subalgebra and special Legendrian for the first sample.
pub fn extension_obstruction<T: Scalar>(
    sub: &Subalgebra<T>,
    family: &FamilySpec<T>,
    mode: Normalization,
) -> Result<Vec<ObstructionSample<T>>> {
    let structure = sub
        .structure()
        .ok_or_else(|| Error::Invalid("subspace is not closed under the bracket".into()))?;
    let Some((_, first)) = family.samples.first() else {
        return Ok(Vec::new());
    };
    let base = first.verify(mode)?;
    let verdict = check_special_legendrian(sub, &base)?.verdict;
    if verdict != LegendrianVerdict::SpecialLegendrian {
        return Err(Error::Invalid(format!(
            "subspace must be special Legendrian at the first sample, got {verdict}"
        )));
    }
    family
        .samples
        .iter()
        .map(|(t, data)| {
            let ccy = data.verify(mode)?;
            let pullback = ccy.epsilon().im.pullback(sub.basis())?;
            let d = structure.differential(&pullback);
            if !d.is_zero() {
                return Err(Error::NotClosed(d.to_string()));
            }
            Ok(ObstructionSample {
                t: t.clone(),
                primitive: structure.is_exact(&pullback)?,
                pullback,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets::heisenberg_ccy;
    use crate::scalar::Rational;

    type Q = Rational;

    fn x(dim: usize, i: usize) -> Vector<Q> {
        Vector::basis(dim, i)
    }

    #[test]
    fn verdict_examples() {
        let h = heisenberg_ccy::<Q>(1)
            .verify(Normalization::Standard)
            .unwrap();
        let sub = Subalgebra::new(h.algebra(), vec![x(3, 1)]).unwrap();
        let r = check_special_legendrian(&sub, &h).unwrap();
        assert_eq!(r.verdict, LegendrianVerdict::SpecialLegendrian);
        assert_eq!(r.orientation, 1);
        let sub = Subalgebra::new(h.algebra(), vec![x(3, 2)]).unwrap();
        assert_eq!(
            check_special_legendrian(&sub, &h).unwrap().verdict,
            LegendrianVerdict::LegendrianOnly
        );
        let sub = Subalgebra::new(h.algebra(), vec![x(3, 3)]).unwrap();
        assert_eq!(
            check_special_legendrian(&sub, &h).unwrap().verdict,
            LegendrianVerdict::NotLegendrian
        );
        let f = heisenberg_ccy::<Q>(2)
            .verify(Normalization::Standard)
            .unwrap();
        let sub = Subalgebra::new(f.algebra(), vec![x(5, 1), x(5, 3)]).unwrap();
        let r = check_special_legendrian(&sub, &f).unwrap();
        assert_eq!(r.verdict, LegendrianVerdict::SpecialLegendrian);
        assert!(r.im_epsilon.is_zero() && r.integrable);
    }

    #[test]
    fn probes_and_sampling() {
        let h = heisenberg_ccy::<Q>(1)
            .verify(Normalization::Standard)
            .unwrap();
        assert_eq!(comass_probe(&h, &[x(3, 1)]).unwrap(), Q::from_int(1));
        assert_eq!(comass_probe(&h, &[x(3, 2)]).unwrap(), Q::from_int(0));
        assert!(comass_probe(&h, &[x(3, 3)]).is_err());
        let f = heisenberg_ccy::<Q>(2)
            .verify(Normalization::Standard)
            .unwrap();
        let a = comass_sample(&f, 10_000, 7, 1);
        let b = comass_sample(&f, 10_000, 7, 3);
        assert_eq!(a, b);
        assert!(a.max <= 1.0 + 1e-9 && a.max > 0.5);
    }

    #[test]
    fn obstruction_examples() {
        let base = heisenberg_ccy::<Q>(1);
        let h = base.algebra.clone();
        let sub = Subalgebra::new(&h, vec![x(3, 1)]).unwrap();
        let q = Q::from_ratio;
        let fam = FamilySpec::rotation(
            &base,
            &[(q(0, 1), q(1, 1), q(0, 1)), (q(1, 1), q(4, 5), q(3, 5))],
        )
        .unwrap();
        let out = extension_obstruction(&sub, &fam, Normalization::Standard).unwrap();
        assert!(out[0].class_is_zero());
        assert!(!out[1].class_is_zero());
        assert_eq!(out[1].pullback, KForm::generator(1, 1).scale(q(3, 5)));
        let fam = FamilySpec::constant(&base, &[q(0, 1), q(1, 2)]);
        let out = extension_obstruction(&sub, &fam, Normalization::Standard).unwrap();
        assert!(out.iter().all(ObstructionSample::class_is_zero));
        assert!(FamilySpec::rotation(&base, &[(q(1, 1), q(1, 2), q(1, 2))]).is_err());
    }
}
