//! Super-derivations extended from generator images by the signed Leibniz
//! rule, and general linear operators with degree-windowed exact matrices.
//!
//! A derivation is stored by its generator images only; evaluation is
//! memoized per monomial. Operators built from derivations compose, add,
//! supercommute and exponentiate (nilpotency on the window is verified, not
//! assumed).

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::algebra::{Algebra, Element, Monomial};
use crate::error::KernelError;
use crate::linalg::QMatrix;
use crate::scalar::{rat_int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_shift(shift: i64) -> Self {
        if shift.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn compose(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn sign_on(self, parity_of_prefix: u8) -> i32 {
        if self == Parity::Odd && parity_of_prefix == 1 {
            -1
        } else {
            1
        }
    }
}

/// A super-derivation of fixed degree shift. Parity is the shift mod 2, as
/// forced by the grading; `D(ab) = (Da)b + (-1)^{|D||a|} a(Db)`.
#[derive(Debug, Clone)]
pub struct Derivation {
    algebra: Arc<Algebra>,
    shift: i64,
    images: Vec<Element>,
    cache: Arc<Mutex<HashMap<Monomial, Element>>>,
}

impl Derivation {
    /// Every generator needs an image (possibly zero) homogeneous of degree
    /// `deg(gen) + shift`.
    pub fn new(
        algebra: &Arc<Algebra>,
        shift: i64,
        images: Vec<Element>,
    ) -> Result<Self, KernelError> {
        if images.len() != algebra.generator_count() {
            return Err(KernelError::Dimension {
                expected: algebra.generator_count(),
                found: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            if img.algebra().id() != algebra.id() {
                return Err(KernelError::AlgebraMismatch);
            }
            let expected = algebra.degree_of(i) as i64 + shift;
            if !img.is_zero_or_homogeneous_of(expected) {
                return Err(KernelError::ImageDegree {
                    name: algebra.generator(i).name.clone(),
                    expected,
                    found: img.render(),
                });
            }
        }
        Ok(Self {
            algebra: Arc::clone(algebra),
            shift,
            images,
            cache: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    pub fn zero(algebra: &Arc<Algebra>, shift: i64) -> Self {
        let images = (0..algebra.generator_count())
            .map(|_| Element::zero(algebra))
            .collect();
        Self::new(algebra, shift, images).expect("zero derivation")
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn parity(&self) -> Parity {
        Parity::from_shift(self.shift)
    }

    pub fn image(&self, idx: usize) -> &Element {
        &self.images[idx]
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// Signed Leibniz expansion on a normal-form monomial.
    fn expand_monomial(&self, m: &Monomial) -> Result<Element, KernelError> {
        let mut out = Element::zero(&self.algebra);
        let parity = self.parity();
        // odd factors: D passes j-1 odd factors to reach position j
        for (j, &gen) in m.exterior.iter().enumerate() {
            let image = &self.images[gen];
            if image.is_zero() {
                continue;
            }
            let sign = parity.sign_on((j % 2) as u8);
            let prefix = Monomial {
                exterior: m.exterior[..j].to_vec(),
                powers: Vec::new(),
            };
            let suffix = Monomial {
                exterior: m.exterior[j + 1..].to_vec(),
                powers: m.powers.clone(),
            };
            let term = Element::monomial(&self.algebra, prefix)
                .mul(image)?
                .mul(&Element::monomial(&self.algebra, suffix))?;
            out = out.add(&term.scale(&rat_int(sign as i64)))?;
        }
        // even factors: D passes the whole odd word
        let sign_even = parity.sign_on((m.exterior.len() % 2) as u8);
        for (pi, &(gen, exp)) in m.powers.iter().enumerate() {
            let image = &self.images[gen];
            if image.is_zero() {
                continue;
            }
            let mut powers = m.powers.clone();
            if exp == 1 {
                powers.remove(pi);
            } else {
                powers[pi] = (gen, exp - 1);
            }
            let word = Monomial {
                exterior: m.exterior.clone(),
                powers,
            };
            let term = Element::monomial(&self.algebra, word).mul(image)?;
            out = out.add(&term.scale(&rat_int(sign_even as i64 * exp as i64)))?;
        }
        Ok(out)
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Result<Element, KernelError> {
        if let Some(hit) = self.cache.lock().unwrap().get(m) {
            return Ok(hit.clone());
        }
        let value = self.expand_monomial(m)?;
        self.cache
            .lock()
            .unwrap()
            .insert(m.clone(), value.clone());
        Ok(value)
    }

    /// Linear extension of the generator images.
    pub fn evaluate(&self, e: &Element) -> Result<Element, KernelError> {
        if e.algebra().id() != self.algebra.id() {
            return Err(KernelError::AlgebraMismatch);
        }
        let mut out = Element::zero(&self.algebra);
        for (m, c) in e.terms() {
            out = out.add(&self.apply_monomial(m)?.scale(c))?;
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self, KernelError> {
        if other.algebra.id() != self.algebra.id() {
            return Err(KernelError::AlgebraMismatch);
        }
        if other.shift != self.shift {
            return Err(KernelError::Invalid(format!(
                "cannot add derivations of shifts {} and {}",
                self.shift, other.shift
            )));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&self.algebra, self.shift, images)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let images = self.images.iter().map(|img| img.scale(c)).collect();
        Self::new(&self.algebra, self.shift, images).expect("scaled derivation")
    }

    /// The super-commutator of two derivations is again a derivation,
    /// determined by its generator images
    /// `[P,Q]_s(g) = P(Qg) - (-1)^{|P||Q|} Q(Pg)`.
    pub fn supercommutator(&self, other: &Self) -> Result<Self, KernelError> {
        if other.algebra.id() != self.algebra.id() {
            return Err(KernelError::AlgebraMismatch);
        }
        let sign = if self.parity() == Parity::Odd && other.parity() == Parity::Odd {
            -1i64
        } else {
            1
        };
        let images = (0..self.algebra.generator_count())
            .map(|i| {
                let pq = self.evaluate(&other.images[i])?;
                let qp = other.evaluate(&self.images[i])?;
                pq.sub(&qp.scale(&rat_int(sign)))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&self.algebra, self.shift + other.shift, images)
    }

    pub fn to_operator(&self) -> LinearOperator {
        let d = self.clone();
        LinearOperator {
            algebra: Arc::clone(&self.algebra),
            shift: self.shift,
            parity: self.parity(),
            func: Arc::new(move |e| d.evaluate(e)),
        }
    }
}

type OpFn = dyn Fn(&Element) -> Result<Element, KernelError> + Send + Sync;

/// A rational-linear operator on an algebra, realizable per degree as an
/// exact matrix between canonical monomial bases.
#[derive(Clone)]
pub struct LinearOperator {
    algebra: Arc<Algebra>,
    shift: i64,
    parity: Parity,
    func: Arc<OpFn>,
}

impl std::fmt::Debug for LinearOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LinearOperator")
            .field("shift", &self.shift)
            .field("parity", &self.parity)
            .finish()
    }
}

impl LinearOperator {
    pub fn new(
        algebra: &Arc<Algebra>,
        shift: i64,
        parity: Parity,
        func: Arc<OpFn>,
    ) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            shift,
            parity,
            func,
        }
    }

    pub fn identity(algebra: &Arc<Algebra>) -> Self {
        Self::new(algebra, 0, Parity::Even, Arc::new(|e: &Element| Ok(e.clone())))
    }

    pub fn zero(algebra: &Arc<Algebra>, shift: i64) -> Self {
        let a = Arc::clone(algebra);
        Self::new(
            algebra,
            shift,
            Parity::from_shift(shift),
            Arc::new(move |_| Ok(Element::zero(&a))),
        )
    }

    /// Left multiplication by a homogeneous element.
    pub fn left_mul(a: &Element) -> Result<Self, KernelError> {
        let deg = a.homogeneous_degree().ok_or_else(|| {
            KernelError::Invalid("left multiplication needs a homogeneous element".into())
        })?;
        let elem = a.clone();
        Ok(Self::new(
            a.algebra(),
            deg,
            Parity::from_shift(deg),
            Arc::new(move |e| elem.mul(e)),
        ))
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn apply(&self, e: &Element) -> Result<Element, KernelError> {
        if e.algebra().id() != self.algebra.id() {
            return Err(KernelError::AlgebraMismatch);
        }
        (self.func)(e)
    }

    /// `self` after `first`, i.e. the composite `self . first`.
    pub fn compose(&self, first: &Self) -> Result<Self, KernelError> {
        if first.algebra.id() != self.algebra.id() {
            return Err(KernelError::AlgebraMismatch);
        }
        let (f, g) = (self.clone(), first.clone());
        Ok(Self::new(
            &self.algebra,
            self.shift + first.shift,
            self.parity.compose(first.parity),
            Arc::new(move |e| f.apply(&g.apply(e)?)),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self, KernelError> {
        if other.algebra.id() != self.algebra.id() {
            return Err(KernelError::AlgebraMismatch);
        }
        if other.shift != self.shift {
            return Err(KernelError::Invalid(format!(
                "cannot add operators of shifts {} and {}",
                self.shift, other.shift
            )));
        }
        let parity = if self.parity == other.parity {
            self.parity
        } else {
            return Err(KernelError::Invalid(
                "cannot add operators of different parity".into(),
            ));
        };
        let (f, g) = (self.clone(), other.clone());
        Ok(Self::new(
            &self.algebra,
            self.shift,
            parity,
            Arc::new(move |e| f.apply(e)?.add(&g.apply(e)?)),
        ))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let f = self.clone();
        let c = c.clone();
        Self::new(
            &self.algebra,
            self.shift,
            self.parity,
            Arc::new(move |e| Ok(f.apply(e)?.scale(&c))),
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self, KernelError> {
        self.add(&other.scale(&rat_int(-1)))
    }

    /// `PQ - (-1)^{|P||Q|} QP`.
    pub fn supercommutator(&self, other: &Self) -> Result<Self, KernelError> {
        let pq = self.compose(other)?;
        let qp = other.compose(self)?;
        let sign = if self.parity == Parity::Odd && other.parity == Parity::Odd {
            -1
        } else {
            1
        };
        let (f, g) = (pq, qp);
        Ok(Self::new(
            &self.algebra,
            self.shift + other.shift,
            self.parity.compose(other.parity),
            Arc::new(move |e| f.apply(e)?.sub(&g.apply(e)?.scale(&rat_int(sign)))),
        ))
    }

    /// Exact matrix of the operator from `basis_of_degree(k)` to
    /// `basis_of_degree(k + shift)`; rows index the target basis.
    pub fn matrix(&self, k: i64) -> Result<QMatrix, KernelError> {
        let source = self.algebra.basis_of_degree(k)?;
        let target = self.algebra.basis_of_degree(k + self.shift)?;
        let index: HashMap<&Monomial, usize> =
            target.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut out = QMatrix::zeros(target.len(), source.len());
        for (col, m) in source.iter().enumerate() {
            let image = self.apply(&Element::monomial(&self.algebra, m.clone()))?;
            for (tm, c) in image.terms() {
                let Some(&row) = index.get(tm) else {
                    return Err(KernelError::Inconsistency(format!(
                        "operator image leaves degree {} (term of degree {})",
                        k + self.shift,
                        tm.degree(&self.algebra)
                    )));
                };
                *out.at_mut(row, col) = c.clone();
            }
        }
        Ok(out)
    }
}

/// `exp(N)` for an operator verified nilpotent on every basis monomial of
/// degree `<= window`. The inverse is `exp(-N)`.
pub fn exp_nilpotent(n: &LinearOperator, window: i64) -> Result<LinearOperator, KernelError> {
    if n.parity != Parity::Even {
        return Err(KernelError::Invalid(
            "exponential of an odd operator is not an algebra map".into(),
        ));
    }
    // dimension bound for the verified window
    let mut bound = 2usize;
    for k in 0..=window {
        bound += n.algebra.basis_of_degree(k)?.len();
    }
    for k in 0..=window {
        for m in n.algebra.basis_of_degree(k)? {
            let mut term = Element::monomial(&n.algebra, m);
            let mut power = 0usize;
            while !term.is_zero() {
                power += 1;
                if power > bound {
                    return Err(KernelError::NotNilpotent(power));
                }
                term = n.apply(&term)?;
            }
        }
    }
    let op = n.clone();
    let cap = 4 * bound;
    Ok(LinearOperator::new(
        &n.algebra,
        n.shift,
        Parity::Even,
        Arc::new(move |e| {
            let mut acc = e.clone();
            let mut term = e.clone();
            let mut m = 0i64;
            while !term.is_zero() {
                m += 1;
                if m as usize > cap {
                    return Err(KernelError::NotNilpotent(m as usize));
                }
                term = op.apply(&term)?.scale(&(rat_int(1) / rat_int(m)));
                acc = acc.add(&term)?;
            }
            Ok(acc)
        }),
    ))
}

/// First basis monomial of degree `<= window` where the operators differ,
/// with the residual `P(m) - Q(m)`.
pub fn operators_disagree_on_window(
    p: &LinearOperator,
    q: &LinearOperator,
    window: i64,
) -> Result<Option<(Monomial, Element)>, KernelError> {
    for k in 0..=window {
        for m in p.algebra.basis_of_degree(k)? {
            let e = Element::monomial(&p.algebra, m.clone());
            let residual = p.apply(&e)?.sub(&q.apply(&e)?)?;
            if !residual.is_zero() {
                return Ok(Some((m, residual)));
            }
        }
    }
    Ok(None)
}
