//! The Cartan model of equivariant cohomology and Kalkman's conjugation
//! between the Weil and Cartan descriptions.
//!
//! Cartan side: on `S g* (x) A` define `d_C = 1 (x) d - Om^k (x) I_k`. The
//! adjoined `Om` variables carry the coadjoint Lie derivative and are not
//! contracted; they are polynomial coefficients, not Weil generators. The
//! operator identities
//!
//! ```text
//! d_C^2 = -Om^k (x) L_k            [on the full ambient algebra]
//! [d_C, L_total] = 0
//! ```
//!
//! make the invariant subcomplex a genuine complex, whose cohomology is the
//! Cartan equivariant cohomology.
//!
//! Kalkman side: on `B = W_G (x) A` with tensor structure maps `D, L, I`,
//! the operators `A^j_i = th^j (x) I_i` are commuting square-zero even
//! derivations, so `exp(A_T)` is an algebra automorphism for every
//! coefficient matrix `T`, and it conjugates `D` to `D_T = D + L_T` with
//! `L_T = t^i_j (th^j (x) L_i - Om^j (x) I_i)`. At `T = id` the conjugated
//! differential is the BRST operator, whose basic subcomplex is exactly the
//! Cartan model.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{Algebra, AlgebraHom, Element, GeneratorSpec, Monomial};
use crate::derivation::{exp_nilpotent, Derivation, LinearOperator};
use crate::error::KernelError;
use crate::linalg::QMatrix;
use crate::operation::{
    cohomology_dims, coords_in_basis, tensor_product, Operation, SubcomplexBasis,
};
use crate::scalar::{rat_int, Rational};
use crate::weil::WeilAlgebra;

/// `S g* (x) A` with the Cartan differential and the total Lie derivative.
#[derive(Debug, Clone)]
pub struct CartanModel {
    pub op: Operation,
    pub algebra: Arc<Algebra>,
    pub incl: AlgebraHom,
    /// Cartan differential `1 (x) d - Om^k (x) I_k`.
    pub differential: Derivation,
    /// Coadjoint on the `Om` variables plus the action on `A`.
    pub total_lie: Vec<Derivation>,
    /// `1 (x) L_k` alone.
    pub a_lie: Vec<Derivation>,
    /// `1 (x) I_k` alone.
    pub a_contraction: Vec<Derivation>,
}

impl CartanModel {
    pub fn new(op: &Operation, s_prefix: &str) -> Result<Self, KernelError> {
        let n = op.dim();
        let s_gens = (1..=n)
            .map(|i| GeneratorSpec::new(format!("{s_prefix}{i}"), 2))
            .collect::<Vec<_>>();
        let s_algebra = Algebra::new(s_gens)?;
        let algebra = Algebra::tensor(&s_algebra, &op.algebra)?;
        let incl = AlgebraHom::inclusion_by_name(&op.algebra, &algebra)?;
        let a_count = op.algebra.generator_count();

        let extend = |der: &Derivation, shift: i64| -> Result<Derivation, KernelError> {
            let mut images = vec![Element::zero(&algebra); n + a_count];
            for g in 0..a_count {
                images[n + g] = incl.apply(der.image(g))?;
            }
            Derivation::new(&algebra, shift, images)
        };

        let a_lie = op
            .lie_derivative
            .iter()
            .map(|l| extend(l, 0))
            .collect::<Result<Vec<_>, _>>()?;
        let a_contraction = op
            .contraction
            .iter()
            .map(|i| extend(i, -1))
            .collect::<Result<Vec<_>, _>>()?;

        // total L: coadjoint on the Om variables, action on A
        let mut total_lie = Vec::with_capacity(n);
        for k in 0..n {
            let mut images = vec![Element::zero(&algebra); n + a_count];
            for j in 0..n {
                let mut img = Element::zero(&algebra);
                for l in 0..n {
                    let c = op.lie.bracket_coeff(j, k, l);
                    if !c.is_zero() {
                        img = img.add(&Element::generator(&algebra, l)?.scale(&-c.clone()))?;
                    }
                }
                images[j] = img;
            }
            for g in 0..a_count {
                images[n + g] = incl.apply(op.lie_derivative[k].image(g))?;
            }
            total_lie.push(Derivation::new(&algebra, 0, images)?);
        }

        // d_C: Om^i -> 0, a -> d(a) - Om^k I_k(a)
        let mut images = vec![Element::zero(&algebra); n + a_count];
        for g in 0..a_count {
            let mut img = incl.apply(op.d.image(g))?;
            for k in 0..n {
                let om_k = Element::generator(&algebra, k)?;
                let contracted = incl.apply(op.contraction[k].image(g))?;
                img = img.sub(&om_k.mul(&contracted)?)?;
            }
            images[n + g] = img;
        }
        let differential = Derivation::new(&algebra, 1, images)?;

        Ok(Self {
            op: op.clone(),
            algebra,
            incl,
            differential,
            total_lie,
            a_lie,
            a_contraction,
        })
    }

    pub fn s_count(&self) -> usize {
        self.op.dim()
    }

    pub fn s_var(&self, i: usize) -> Element {
        Element::generator(&self.algebra, i).expect("s variable")
    }

    pub fn is_invariant(&self, e: &Element) -> Result<bool, KernelError> {
        for l in &self.total_lie {
            if !l.evaluate(e)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Basis of the invariant subspace in degree `k` (joint kernel of the
    /// total Lie derivatives).
    pub fn invariant_basis(&self, k: i64) -> Result<Vec<Element>, KernelError> {
        let basis = self.algebra.basis_of_degree(k)?;
        if basis.is_empty() {
            return Ok(Vec::new());
        }
        let blocks = self
            .total_lie
            .iter()
            .map(|l| l.to_operator().matrix(k))
            .collect::<Result<Vec<_>, _>>()?;
        if blocks.is_empty() {
            return Ok(basis
                .into_iter()
                .map(|m| Element::monomial(&self.algebra, m))
                .collect());
        }
        let refs: Vec<&QMatrix> = blocks.iter().collect();
        let kernel = QMatrix::stack(&refs).kernel_basis();
        Ok(kernel
            .into_iter()
            .map(|coeffs| {
                Element::from_terms(
                    &self.algebra,
                    basis
                        .iter()
                        .cloned()
                        .zip(coeffs)
                        .filter(|(_, c)| !c.is_zero()),
                )
            })
            .collect())
    }

    pub fn invariant_complex(&self, max_degree: i64) -> Result<SubcomplexBasis, KernelError> {
        let per_degree = (0..=max_degree)
            .map(|k| self.invariant_basis(k))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SubcomplexBasis {
            algebra: Arc::clone(&self.algebra),
            per_degree,
        })
    }

    /// `dim H^k((S g* (x) A)^G, d_C)` for `k = 0..=max_degree`.
    pub fn cohomology_dims(&self, max_degree: i64) -> Result<Vec<usize>, KernelError> {
        let complex = self.invariant_complex(max_degree + 1)?;
        cohomology_dims(&self.differential.to_operator(), &complex, max_degree)
    }

    /// Witness against `d_C^2 = -Om^k (x) L_k` on the full ambient algebra.
    pub fn square_identity_witness(
        &self,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        for k in 0..=window {
            for m in self.algebra.basis_of_degree(k)? {
                let e = Element::monomial(&self.algebra, m);
                let dd = self
                    .differential
                    .evaluate(&self.differential.evaluate(&e)?)?;
                let mut rhs = Element::zero(&self.algebra);
                for i in 0..self.s_count() {
                    rhs = rhs.sub(&self.s_var(i).mul(&self.a_lie[i].evaluate(&e)?)?)?;
                }
                let residual = dd.sub(&rhs)?;
                if !residual.is_zero() {
                    return Ok(Some((e.render(), residual.render())));
                }
            }
        }
        Ok(None)
    }

    /// Witness against `[d_C, L_total,k] = 0` for every `k`.
    pub fn equivariance_witness(
        &self,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        for k in 0..=window {
            for m in self.algebra.basis_of_degree(k)? {
                let e = Element::monomial(&self.algebra, m);
                for l in &self.total_lie {
                    let residual = self
                        .differential
                        .evaluate(&l.evaluate(&e)?)?
                        .sub(&l.evaluate(&self.differential.evaluate(&e)?)?)?;
                    if !residual.is_zero() {
                        return Ok(Some((e.render(), residual.render())));
                    }
                }
            }
        }
        Ok(None)
    }
}

/// Kalkman's operator family on `W_G (x) A` for a coefficient matrix
/// `T = (t^i_j)`.
#[derive(Debug, Clone)]
pub struct KalkmanFamily {
    pub weil: WeilAlgebra,
    pub a_op: Operation,
    pub tensor: Operation,
    pub t: Vec<Vec<Rational>>,
    /// `A_T = t^i_j th^j (x) I_i`, an even square-zero-sum derivation.
    pub a_t: Derivation,
    /// `L_T = t^i_j (th^j (x) L_i - Om^j (x) I_i)`, odd of shift +1.
    pub l_t: Derivation,
    /// `D_T = D + L_T`.
    pub d_t: Derivation,
}

impl KalkmanFamily {
    pub fn new(
        weil: &WeilAlgebra,
        a_op: &Operation,
        t: Vec<Vec<Rational>>,
    ) -> Result<Self, KernelError> {
        let n = weil.op.dim();
        if t.len() != n || t.iter().any(|row| row.len() != n) {
            return Err(KernelError::Dimension {
                expected: n,
                found: t.len(),
            });
        }
        let tensor = tensor_product(&weil.op, a_op)?;
        let algebra = Arc::clone(&tensor.algebra);
        let incl_a = AlgebraHom::inclusion_by_name(&a_op.algebra, &algebra)?;
        let w_count = weil.op.algebra.generator_count();
        let a_count = a_op.algebra.generator_count();

        let theta = |j: usize| Element::generator(&algebra, j);
        let omega = |j: usize| Element::generator(&algebra, n + j);

        let mut a_images = vec![Element::zero(&algebra); w_count + a_count];
        let mut l_images = vec![Element::zero(&algebra); w_count + a_count];
        for g in 0..a_count {
            let mut a_img = Element::zero(&algebra);
            let mut l_img = Element::zero(&algebra);
            for i in 0..n {
                for j in 0..n {
                    let c = &t[i][j];
                    if c.is_zero() {
                        continue;
                    }
                    let ig = incl_a.apply(a_op.contraction[i].image(g))?;
                    let lg = incl_a.apply(a_op.lie_derivative[i].image(g))?;
                    a_img = a_img.add(&theta(j)?.mul(&ig)?.scale(c))?;
                    l_img = l_img.add(
                        &theta(j)?
                            .mul(&lg)?
                            .sub(&omega(j)?.mul(&ig)?)?
                            .scale(c),
                    )?;
                }
            }
            a_images[w_count + g] = a_img;
            l_images[w_count + g] = l_img;
        }
        let a_t = Derivation::new(&algebra, 0, a_images)?;
        let l_t = Derivation::new(&algebra, 1, l_images)?;
        let d_t = tensor.d.add(&l_t)?;
        Ok(Self {
            weil: weil.clone(),
            a_op: a_op.clone(),
            tensor,
            t,
            a_t,
            l_t,
            d_t,
        })
    }

    /// The identity coefficient matrix, giving the BRST operator `D_id`.
    pub fn identity_t(n: usize) -> Vec<Vec<Rational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { rat_int(1) } else { rat_int(0) })
                    .collect()
            })
            .collect()
    }

    pub fn zero_t(n: usize) -> Vec<Vec<Rational>> {
        vec![vec![rat_int(0); n]; n]
    }

    pub fn exp_a(&self, window: i64) -> Result<LinearOperator, KernelError> {
        exp_nilpotent(&self.a_t.to_operator(), window)
    }

    pub fn exp_a_inv(&self, window: i64) -> Result<LinearOperator, KernelError> {
        exp_nilpotent(&self.a_t.scale(&rat_int(-1)).to_operator(), window)
    }

    /// First monomial of degree `<= window` where
    /// `exp(A_T) D exp(-A_T) != D + L_T`, with the residual.
    pub fn conjugation_witness(
        &self,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        let fwd = self.exp_a(window)?;
        let back = self.exp_a_inv(window)?;
        let algebra = &self.tensor.algebra;
        for k in 0..=window {
            for m in algebra.basis_of_degree(k)? {
                let e = Element::monomial(algebra, m);
                let lhs = fwd.apply(&self.tensor.d.evaluate(&back.apply(&e)?)?)?;
                let rhs = self.d_t.evaluate(&e)?;
                let residual = lhs.sub(&rhs)?;
                if !residual.is_zero() {
                    return Ok(Some((e.render(), residual.render())));
                }
            }
        }
        Ok(None)
    }

    /// First witness against `L_{T,k} = exp(A_T) L_k exp(-A_T) = L_k`.
    pub fn lie_invariance_witness(
        &self,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        let fwd = self.exp_a(window)?;
        let back = self.exp_a_inv(window)?;
        let algebra = &self.tensor.algebra;
        for k in 0..=window {
            for m in algebra.basis_of_degree(k)? {
                let e = Element::monomial(algebra, m);
                for l in &self.tensor.lie_derivative {
                    let conj = fwd.apply(&l.evaluate(&back.apply(&e)?)?)?;
                    let residual = conj.sub(&l.evaluate(&e)?)?;
                    if !residual.is_zero() {
                        return Ok(Some((e.render(), residual.render())));
                    }
                }
            }
        }
        Ok(None)
    }

    /// The curvature correction in the exact conjugation formula
    ///
    /// ```text
    /// exp(A_T) D exp(-A_T)
    ///     = D + L_T + 1/2 [t^i_c C^c_{kl} - C^i_{ab} t^a_k t^b_l]
    ///                  th^k th^l (x) I_i
    /// ```
    ///
    /// (a terminating commutator expansion). The bracket vanishes, and the
    /// conjugation equals `D_T` on the nose, exactly when the coefficient
    /// matrix intertwines the Lie bracket: `T[x,y] = [Tx,Ty]`. That covers
    /// `T = 0`, `T = id`, Lie algebra automorphisms, and every `T` over an
    /// abelian algebra.
    pub fn conjugation_correction(&self) -> Result<Derivation, KernelError> {
        let n = self.theta_count();
        let lie = &self.weil.op.lie;
        let algebra = &self.tensor.algebra;
        let incl_a = AlgebraHom::inclusion_by_name(&self.a_op.algebra, algebra)?;
        let w_count = self.weil.op.algebra.generator_count();
        let a_count = self.a_op.algebra.generator_count();
        let mut r = vec![vec![vec![Rational::from_integer(0.into()); n]; n]; n];
        for i in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = Rational::from_integer(0.into());
                    for c in 0..n {
                        v += &self.t[i][c] * lie.bracket_coeff(c, k, l);
                    }
                    for a in 0..n {
                        for b in 0..n {
                            v -= lie.bracket_coeff(i, a, b) * &self.t[a][k] * &self.t[b][l];
                        }
                    }
                    r[i][k][l] = v;
                }
            }
        }
        let mut images = vec![Element::zero(algebra); w_count + a_count];
        for g in 0..a_count {
            let mut img = Element::zero(algebra);
            for i in 0..n {
                let ig = incl_a.apply(self.a_op.contraction[i].image(g))?;
                if ig.is_zero() {
                    continue;
                }
                for k in 0..n {
                    for l in 0..n {
                        if r[i][k][l].is_zero() {
                            continue;
                        }
                        let theta_kl = Element::generator(algebra, k)?
                            .mul(&Element::generator(algebra, l)?)?;
                        let half = crate::scalar::rat(1, 2) * &r[i][k][l];
                        img = img.add(&theta_kl.mul(&ig)?.scale(&half))?;
                    }
                }
            }
            images[w_count + g] = img;
        }
        Derivation::new(algebra, 1, images)
    }

    /// Verify the exact conjugation formula (with curvature correction) on
    /// the window; holds for every coefficient matrix.
    pub fn exact_conjugation_witness(
        &self,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        let corrected = self.d_t.add(&self.conjugation_correction()?)?;
        let fwd = self.exp_a(window)?;
        let back = self.exp_a_inv(window)?;
        let algebra = &self.tensor.algebra;
        for k in 0..=window {
            for m in algebra.basis_of_degree(k)? {
                let e = Element::monomial(algebra, m);
                let lhs = fwd.apply(&self.tensor.d.evaluate(&back.apply(&e)?)?)?;
                let rhs = corrected.evaluate(&e)?;
                let residual = lhs.sub(&rhs)?;
                if !residual.is_zero() {
                    return Ok(Some((e.render(), residual.render())));
                }
            }
        }
        Ok(None)
    }

    /// `T[x,y] = [Tx,Ty]` for all basis pairs: the condition under which
    /// the conjugation equals `D_T` with no correction.
    pub fn t_intertwines_bracket(&self) -> bool {
        let n = self.theta_count();
        let lie = &self.weil.op.lie;
        for i in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = Rational::from_integer(0.into());
                    for c in 0..n {
                        v += &self.t[i][c] * lie.bracket_coeff(c, k, l);
                    }
                    for a in 0..n {
                        for b in 0..n {
                            v -= lie.bracket_coeff(i, a, b) * &self.t[a][k] * &self.t[b][l];
                        }
                    }
                    if !v.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// `T ad_k = ad_k T` for every `k`: the condition under which the
    /// conjugated Lie derivatives equal the original ones.
    pub fn t_commutes_with_coadjoint(&self) -> bool {
        let n = self.theta_count();
        let lie = &self.weil.op.lie;
        for k in 0..n {
            for m in 0..n {
                for j in 0..n {
                    let mut v = Rational::from_integer(0.into());
                    for i in 0..n {
                        v += lie.bracket_coeff(m, k, i) * &self.t[i][j];
                    }
                    for l in 0..n {
                        v -= &self.t[m][l] * lie.bracket_coeff(l, k, j);
                    }
                    if !v.is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Multiplicativity of `exp(A_T)` on pairs of window monomials.
    pub fn automorphism_witness(
        &self,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        let fwd = self.exp_a(window)?;
        let algebra = &self.tensor.algebra;
        for p in 0..=window {
            for q in 0..=(window - p) {
                for ma in algebra.basis_of_degree(p)? {
                    for mb in algebra.basis_of_degree(q)? {
                        let ea = Element::monomial(algebra, ma.clone());
                        let eb = Element::monomial(algebra, mb.clone());
                        let lhs = fwd.apply(&ea.mul(&eb)?)?;
                        let rhs = fwd.apply(&ea)?.mul(&fwd.apply(&eb)?)?;
                        let residual = lhs.sub(&rhs)?;
                        if !residual.is_zero() {
                            return Ok(Some((
                                format!("({}) * ({})", ea.render(), eb.render()),
                                residual.render(),
                            )));
                        }
                    }
                }
            }
        }
        Ok(None)
    }

    fn theta_count(&self) -> usize {
        self.weil.op.dim()
    }

    /// True when the monomial contains no Weil `th` generator.
    fn is_theta_free(&self, m: &Monomial) -> bool {
        m.exterior.iter().all(|&i| i >= self.theta_count())
    }

    /// The conjugated contraction `I_{T,k} = exp(A_T) I_k exp(-A_T)`.
    pub fn conjugated_contraction(
        &self,
        k: usize,
        window: i64,
    ) -> Result<LinearOperator, KernelError> {
        let fwd = self.exp_a(window)?;
        let back = self.exp_a_inv(window)?;
        fwd.compose(&self.tensor.contraction[k].to_operator())?
            .compose(&back)
    }

    /// BRST horizontality: on each degree `<= window`, the joint kernel of
    /// the conjugated contractions `I_{id,k}` must be exactly the span of
    /// the theta-free monomials. Returns a description of the first failure.
    pub fn brst_horizontal_witness(&self, window: i64) -> Result<Option<String>, KernelError> {
        let algebra = &self.tensor.algebra;
        let n = self.tensor.dim();
        let conj: Vec<LinearOperator> = (0..n)
            .map(|k| self.conjugated_contraction(k, window))
            .collect::<Result<Vec<_>, _>>()?;
        for k in 0..=window {
            let basis = algebra.basis_of_degree(k)?;
            if basis.is_empty() {
                continue;
            }
            let mats = conj
                .iter()
                .map(|op| op.matrix(k))
                .collect::<Result<Vec<_>, _>>()?;
            let refs: Vec<&QMatrix> = mats.iter().collect();
            let kernel_dim = basis.len() - QMatrix::stack(&refs).rank();
            let theta_free: Vec<&Monomial> =
                basis.iter().filter(|m| self.is_theta_free(m)).collect();
            if kernel_dim != theta_free.len() {
                return Ok(Some(format!(
                    "degree {k}: ker I_id has dimension {kernel_dim}, theta-free span has {}",
                    theta_free.len()
                )));
            }
            for m in theta_free {
                let e = Element::monomial(algebra, (*m).clone());
                for op in &conj {
                    let image = op.apply(&e)?;
                    if !image.is_zero() {
                        return Ok(Some(format!(
                            "theta-free monomial {} escapes ker I_id: {}",
                            e.render(),
                            image.render()
                        )));
                    }
                }
            }
        }
        Ok(None)
    }

    /// The substitution `th -> 0, Om^i -> S-variable, A unchanged` into a
    /// Cartan model built over the same `A`.
    pub fn basic_projection(&self, cartan: &CartanModel) -> Result<AlgebraHom, KernelError> {
        let n = self.theta_count();
        let w_count = self.weil.op.algebra.generator_count();
        let a_count = self.a_op.algebra.generator_count();
        let mut images = vec![Element::zero(&cartan.algebra); w_count + a_count];
        for i in 0..n {
            images[n + i] = cartan.s_var(i);
        }
        for g in 0..a_count {
            let name = &self.a_op.algebra.generator(g).name;
            images[w_count + g] = Element::generator_named(&cartan.algebra, name)?;
        }
        AlgebraHom::new(&self.tensor.algebra, &cartan.algebra, images)
    }

    /// The inclusion of the Cartan ambient algebra as the theta-free part.
    pub fn cartan_injection(&self, cartan: &CartanModel) -> Result<AlgebraHom, KernelError> {
        let n = self.theta_count();
        let a_count = self.a_op.algebra.generator_count();
        let mut images = Vec::with_capacity(n + a_count);
        for i in 0..n {
            images.push(Element::generator(&self.tensor.algebra, n + i)?);
        }
        for g in 0..a_count {
            let name = &self.a_op.algebra.generator(g).name;
            images.push(Element::generator_named(&self.tensor.algebra, name)?);
        }
        AlgebraHom::new(&cartan.algebra, &self.tensor.algebra, images)
    }

    /// On invariant theta-free elements the BRST differential agrees with
    /// the Cartan differential: `D_id(inject P) = inject(d_C P)` for every
    /// invariant basis element of degree `<= window`.
    pub fn brst_cartan_witness(
        &self,
        cartan: &CartanModel,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        let inject = self.cartan_injection(cartan)?;
        for k in 0..=window {
            for p in cartan.invariant_basis(k)? {
                let lhs = self.d_t.evaluate(&inject.apply(&p)?)?;
                let rhs = inject.apply(&cartan.differential.evaluate(&p)?)?;
                let residual = lhs.sub(&rhs)?;
                if !residual.is_zero() {
                    return Ok(Some((p.render(), residual.render())));
                }
            }
        }
        Ok(None)
    }

    /// Kalkman's map on a verified-basic element: substitute `th -> 0`,
    /// keep `Om` and the `A` part. Errors when the input is not basic.
    pub fn map_basic(
        &self,
        cartan: &CartanModel,
        x: &Element,
    ) -> Result<Element, KernelError> {
        if !self.tensor.is_basic(x)? {
            return Err(KernelError::NotBasic(x.render()));
        }
        self.basic_projection(cartan)?.apply(x)
    }

    /// On basics, `exp(A_id)` acts as the substitution `th -> 0`; this
    /// verifies the agreement on every basic basis element of degree
    /// `<= window` (projected into the Cartan ambient algebra for the
    /// comparison).
    pub fn map_basic_agrees_with_exp(
        &self,
        cartan: &CartanModel,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        let proj = self.basic_projection(cartan)?;
        let fwd = self.exp_a(window)?;
        for k in 0..=window {
            for x in self
                .tensor
                .subspace_basis(crate::operation::SubspaceKind::Basic, k)?
            {
                let via_exp = proj.apply(&fwd.apply(&x)?)?;
                let direct = self.map_basic(cartan, &x)?;
                let residual = via_exp.sub(&direct)?;
                if !residual.is_zero() {
                    return Ok(Some((x.render(), residual.render())));
                }
            }
        }
        Ok(None)
    }
}

/// Dimensions of the basic cohomology of `W_G (x) A`, the Weil description
/// of equivariant cohomology.
pub fn weil_model_dims(
    weil: &WeilAlgebra,
    a_op: &Operation,
    max_degree: i64,
) -> Result<Vec<usize>, KernelError> {
    let tensor = tensor_product(&weil.op, a_op)?;
    tensor.basic_cohomology_dims(max_degree)
}

/// Deterministic seeded coefficient matrices with entries in `{-2..2}`,
/// from a splitmix64 stream.
pub fn seeded_t_matrix(n: usize, seed: u64) -> Vec<Vec<Rational>> {
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    };
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| rat_int((next() % 5) as i64 - 2))
                .collect()
        })
        .collect()
}

/// Sanity helper used by reports: coordinates of an element over the
/// degree-`k` monomial basis, or an error when it has terms elsewhere.
pub fn degree_coords(e: &Element, k: i64) -> Result<Vec<Rational>, KernelError> {
    coords_in_basis(e, &e.algebra().basis_of_degree(k)?)
}
