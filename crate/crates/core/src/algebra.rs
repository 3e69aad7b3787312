//! Free super-commutative Z-graded algebras on finitely many homogeneous
//! generators, with sparse exact-rational elements in unique normal form.
//!
//! Parity of a generator is its degree mod 2. Odd generators are exterior
//! (their squares vanish), even generators are polynomial. A monomial stores
//! its odd factors as a strictly increasing index list and its even factors
//! as a sparse exponent vector; two elements are equal iff their term maps
//! are equal.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::KernelError;
use crate::scalar::{is_negative, render_rational, Rational};

static NEXT_ALGEBRA_ID: AtomicU64 = AtomicU64::new(1);

/// A named homogeneous generator. Parity is `degree % 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: u32,
}

impl GeneratorSpec {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        Self {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }
}

/// A free graded-commutative algebra. Declaration order fixes generator
/// indices; the identity of an algebra (not just its shape) is part of every
/// element, so elements of different constructions never mix silently.
#[derive(Debug)]
pub struct Algebra {
    id: u64,
    gens: Vec<GeneratorSpec>,
    by_name: HashMap<String, usize>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}
impl Eq for Algebra {}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Algebra {
    pub fn new(gens: Vec<GeneratorSpec>) -> Result<Arc<Self>, KernelError> {
        let mut by_name = HashMap::new();
        for (i, g) in gens.iter().enumerate() {
            if !valid_name(&g.name) {
                return Err(KernelError::Invalid(format!(
                    "generator name `{}` is not an identifier",
                    g.name
                )));
            }
            if by_name.insert(g.name.clone(), i).is_some() {
                return Err(KernelError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Arc::new(Self {
            id: NEXT_ALGEBRA_ID.fetch_add(1, AtomicOrdering::Relaxed),
            gens,
            by_name,
        }))
    }

    /// The algebra with no generators (just the scalars).
    pub fn trivial() -> Arc<Self> {
        Self::new(Vec::new()).expect("trivial algebra")
    }

    /// Disjoint union of generators, left factor first. Generator names must
    /// stay unique across both factors.
    pub fn tensor(left: &Arc<Self>, right: &Arc<Self>) -> Result<Arc<Self>, KernelError> {
        let mut gens = left.gens.clone();
        gens.extend(right.gens.iter().cloned());
        Self::new(gens)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn generator(&self, idx: usize) -> &GeneratorSpec {
        &self.gens[idx]
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.gens
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn degree_of(&self, idx: usize) -> u32 {
        self.gens[idx].degree
    }

    /// True when every generator has positive degree, so each total degree
    /// carries only finitely many monomials.
    pub fn is_positively_graded(&self) -> bool {
        self.gens.iter().all(|g| g.degree > 0)
    }

    /// All normal-form monomials of total degree `k`, in canonical order:
    /// exterior index lists lexicographic, then exponent vectors
    /// lexicographic. Deterministic across runs.
    pub fn basis_of_degree(self: &Arc<Self>, k: i64) -> Result<Vec<Monomial>, KernelError> {
        if let Some(z) = self.gens.iter().position(|g| g.degree == 0) {
            return Err(KernelError::UnboundedDegree(z));
        }
        if k < 0 {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        let mut current = Monomial::one();
        self.enumerate(0, k as u32, &mut current, &mut out);
        out.sort();
        Ok(out)
    }

    fn enumerate(self: &Arc<Self>, idx: usize, remaining: u32, current: &mut Monomial, out: &mut Vec<Monomial>) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        if idx >= self.gens.len() {
            return;
        }
        let deg = self.gens[idx].degree;
        // skip this generator entirely
        self.enumerate(idx + 1, remaining, current, out);
        if self.gens[idx].is_odd() {
            if deg <= remaining {
                current.exterior.push(idx);
                self.enumerate(idx + 1, remaining - deg, current, out);
                current.exterior.pop();
            }
        } else {
            let mut used = 0u32;
            let mut exp = 0u32;
            while used + deg <= remaining {
                used += deg;
                exp += 1;
                current.powers.push((idx, exp));
                self.enumerate(idx + 1, remaining - used, current, out);
                current.powers.pop();
            }
        }
    }

    pub fn dim_of_degree(self: &Arc<Self>, k: i64) -> Result<usize, KernelError> {
        Ok(self.basis_of_degree(k)?.len())
    }
}

/// A normal-form monomial: strictly increasing odd-generator indices plus a
/// sparse exponent vector on even generators (positive exponents only).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    pub exterior: Vec<usize>,
    pub powers: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn is_one(&self) -> bool {
        self.exterior.is_empty() && self.powers.is_empty()
    }

    pub fn generator(algebra: &Algebra, idx: usize) -> Self {
        if algebra.generator(idx).is_odd() {
            Self {
                exterior: vec![idx],
                powers: Vec::new(),
            }
        } else {
            Self {
                exterior: Vec::new(),
                powers: vec![(idx, 1)],
            }
        }
    }

    pub fn degree(&self, algebra: &Algebra) -> i64 {
        let ext: i64 = self
            .exterior
            .iter()
            .map(|&i| algebra.degree_of(i) as i64)
            .sum();
        let pow: i64 = self
            .powers
            .iter()
            .map(|&(i, e)| algebra.degree_of(i) as i64 * e as i64)
            .sum();
        ext + pow
    }

    /// Parity of the monomial; odd generators all have odd degree, so this is
    /// the number of exterior factors mod 2.
    pub fn parity(&self) -> u8 {
        (self.exterior.len() % 2) as u8
    }

    /// Graded product of two normal-form monomials. Returns `None` when an
    /// odd generator repeats, otherwise the Koszul sign and the merged
    /// monomial.
    pub fn mul(&self, other: &Self) -> Option<(i32, Self)> {
        let mut sign = 1i32;
        let mut exterior = Vec::with_capacity(self.exterior.len() + other.exterior.len());
        let (a, b) = (&self.exterior, &other.exterior);
        let (mut i, mut j) = (0usize, 0usize);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                Ordering::Equal => return None,
                Ordering::Less => {
                    exterior.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    // b[j] crosses the remaining odd factors of `a`
                    if (a.len() - i) % 2 == 1 {
                        sign = -sign;
                    }
                    exterior.push(b[j]);
                    j += 1;
                }
            }
        }
        exterior.extend_from_slice(&a[i..]);
        exterior.extend_from_slice(&b[j..]);

        let mut powers = Vec::with_capacity(self.powers.len() + other.powers.len());
        let (p, q) = (&self.powers, &other.powers);
        let (mut i, mut j) = (0usize, 0usize);
        while i < p.len() && j < q.len() {
            match p[i].0.cmp(&q[j].0) {
                Ordering::Equal => {
                    powers.push((p[i].0, p[i].1 + q[j].1));
                    i += 1;
                    j += 1;
                }
                Ordering::Less => {
                    powers.push(p[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    powers.push(q[j]);
                    j += 1;
                }
            }
        }
        powers.extend_from_slice(&p[i..]);
        powers.extend_from_slice(&q[j..]);

        Some((sign, Self { exterior, powers }))
    }

    fn render(&self, algebra: &Algebra) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        // factors in ascending generator-index order, exterior and even mixed
        let mut factors: Vec<(usize, String)> = Vec::new();
        for &i in &self.exterior {
            factors.push((i, algebra.generator(i).name.clone()));
        }
        for &(i, e) in &self.powers {
            let name = &algebra.generator(i).name;
            let s = if e == 1 {
                name.clone()
            } else {
                format!("{name}^{e}")
            };
            factors.push((i, s));
        }
        factors.sort_by_key(|(i, _)| *i);
        factors
            .into_iter()
            .map(|(_, s)| s)
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Canonical monomial order: exterior index lists lexicographic, then the
/// even exponent vectors compared as dense vectors in index order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.exterior.cmp(&other.exterior) {
            Ordering::Equal => {}
            ord => return ord,
        }
        // dense lexicographic comparison of sparse exponent vectors
        let (p, q) = (&self.powers, &other.powers);
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            match (p.get(i), q.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(ia, ea)), Some(&(ib, eb))) => match ia.cmp(&ib) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => match ea.cmp(&eb) {
                        Ordering::Equal => {
                            i += 1;
                            j += 1;
                        }
                        ord => return ord,
                    },
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse exact-rational linear combination of normal-form monomials: the
/// universal value type of the kernel. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Element {
    algebra: Arc<Algebra>,
    terms: BTreeMap<Monomial, Rational>,
}

impl Element {
    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        Self {
            algebra: Arc::clone(algebra),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: &Arc<Algebra>) -> Self {
        Self::scalar(algebra, Rational::one())
    }

    pub fn scalar(algebra: &Arc<Algebra>, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Self {
            algebra: Arc::clone(algebra),
            terms,
        }
    }

    pub fn generator(algebra: &Arc<Algebra>, idx: usize) -> Result<Self, KernelError> {
        if idx >= algebra.generator_count() {
            return Err(KernelError::GeneratorIndex(idx));
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::generator(algebra, idx), Rational::one());
        Ok(Self {
            algebra: Arc::clone(algebra),
            terms,
        })
    }

    pub fn generator_named(algebra: &Arc<Algebra>, name: &str) -> Result<Self, KernelError> {
        let idx = algebra
            .find(name)
            .ok_or_else(|| KernelError::UnknownGenerator(name.to_string()))?;
        Self::generator(algebra, idx)
    }

    pub fn from_terms(
        algebra: &Arc<Algebra>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut out = Self::zero(algebra);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn monomial(algebra: &Arc<Algebra>, m: Monomial) -> Self {
        Self::from_terms(algebra, [(m, Rational::one())])
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_same(&self, other: &Self) -> Result<(), KernelError> {
        if self.algebra.id() != other.algebra.id() {
            return Err(KernelError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, KernelError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, KernelError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.algebra);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.clone() * c;
        }
        out
    }

    /// Normal form of the graded product. Bilinear, associative, and
    /// super-commutative on homogeneous elements.
    pub fn mul(&self, other: &Self) -> Result<Self, KernelError> {
        self.check_same(other)?;
        let mut out = Self::zero(&self.algebra);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((sign, m)) = ma.mul(mb) {
                    let mut c = ca * cb;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Result<Self, KernelError> {
        let mut out = Self::one(&self.algebra);
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// The sum of all degree-`k` terms.
    pub fn degree_component(&self, k: i64) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.degree(&self.algebra) == k)
            .map(|(m, c)| (m.clone(), c.clone()));
        Self::from_terms(&self.algebra, terms.collect::<Vec<_>>())
    }

    /// Map degree -> homogeneous component; the components sum back to the
    /// element.
    pub fn homogeneous_components(&self) -> BTreeMap<i64, Self> {
        let mut out: BTreeMap<i64, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.degree(&self.algebra);
            out.entry(k)
                .or_insert_with(|| Self::zero(&self.algebra))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// `Some(k)` when every stored term has degree `k`; `None` for zero or
    /// mixed-degree elements.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut iter = self.terms.keys();
        let first = iter.next()?.degree(&self.algebra);
        for m in iter {
            if m.degree(&self.algebra) != first {
                return None;
            }
        }
        Some(first)
    }

    /// Degree check for derivation/hom images: zero passes, otherwise the
    /// element must be homogeneous of degree `k`.
    pub fn is_zero_or_homogeneous_of(&self, k: i64) -> bool {
        self.is_zero() || self.homogeneous_degree() == Some(k)
    }

    pub fn max_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.degree(&self.algebra))
            .max()
            .unwrap_or(0)
    }

    /// Canonical text form; `parse_element` inverts it.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff = render_rational(&abs);
            if m.is_one() {
                out.push_str(&coeff);
            } else if abs.is_one() {
                out.push_str(&m.render(&self.algebra));
            } else {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&m.render(&self.algebra));
            }
        }
        out
    }
}

/// A degree-preserving algebra morphism, fixed by generator images. Images
/// must be zero or homogeneous of the generator's degree, so parity is
/// preserved and extension by multiplicativity is well defined.
#[derive(Debug, Clone)]
pub struct AlgebraHom {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    images: Vec<Element>,
}

impl AlgebraHom {
    pub fn new(
        source: &Arc<Algebra>,
        target: &Arc<Algebra>,
        images: Vec<Element>,
    ) -> Result<Self, KernelError> {
        if images.len() != source.generator_count() {
            return Err(KernelError::Dimension {
                expected: source.generator_count(),
                found: images.len(),
            });
        }
        for (i, img) in images.iter().enumerate() {
            if img.algebra().id() != target.id() {
                return Err(KernelError::AlgebraMismatch);
            }
            let expected = source.degree_of(i) as i64;
            if !img.is_zero_or_homogeneous_of(expected) {
                return Err(KernelError::ImageDegree {
                    name: source.generator(i).name.clone(),
                    expected,
                    found: img.render(),
                });
            }
        }
        Ok(Self {
            source: Arc::clone(source),
            target: Arc::clone(target),
            images,
        })
    }

    /// The identity-on-names inclusion for algebras whose generator list
    /// starts with (or contains) the source generators by name.
    pub fn inclusion_by_name(
        source: &Arc<Algebra>,
        target: &Arc<Algebra>,
    ) -> Result<Self, KernelError> {
        let images = source
            .generators()
            .iter()
            .map(|g| Element::generator_named(target, &g.name))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(source, target, images)
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn image(&self, idx: usize) -> &Element {
        &self.images[idx]
    }

    pub fn apply_monomial(&self, m: &Monomial) -> Result<Element, KernelError> {
        let mut acc = Element::one(&self.target);
        for &i in &m.exterior {
            acc = acc.mul(&self.images[i])?;
        }
        for &(i, e) in &m.powers {
            acc = acc.mul(&self.images[i].pow(e)?)?;
        }
        Ok(acc)
    }

    pub fn apply(&self, e: &Element) -> Result<Element, KernelError> {
        if e.algebra().id() != self.source.id() {
            return Err(KernelError::AlgebraMismatch);
        }
        let mut out = Element::zero(&self.target);
        for (m, c) in e.terms() {
            out = out.add(&self.apply_monomial(m)?.scale(c))?;
        }
        Ok(out)
    }
}
