//! Algebraic connections on an operation: a degree-1 assignment
//! `theta~: g* -> A^1` with `I_j theta~^k = delta^k_j` and the coadjoint
//! equivariance `L_k theta~^i = -C^i_{kj} theta~^j`.
//!
//! From a connection:
//!   * curvature `om~^i = d theta~^i + 1/2 C^i_{jk} theta~^j theta~^k`,
//!     horizontal in every direction;
//!   * the horizontal projection `h = prod_k (1 - theta~^k I_k)` (the
//!     factors commute, so the ascending order is a convention, not a
//!     choice);
//!   * the covariant derivative `nabla = h . d` with the Maurer-Cartan and
//!     Bianchi identities `nabla theta~^i = om~^i`, `nabla om~^i = 0`;
//!   * the Chern-Weil morphism `W_g -> A`, `th^i -> theta~^i`,
//!     `Om^i -> om~^i`.
//!
//! Two connections are interpolated through the line extension
//! `Q[t, dt] (x) A`: the connection `theta^ = (1-t) theta~_0 + t theta~_1`
//! has a curvature whose fiber integral is the transgression homotopy `K`
//! with `cw_1 - cw_0 = dK + K d_W`.

use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::{Algebra, AlgebraHom, Element, GeneratorSpec, Monomial};
use crate::derivation::{Derivation, LinearOperator};
use crate::error::KernelError;
use crate::lie::LieAlgebraData;
use crate::operation::Operation;
use crate::scalar::{rat, rat_int};
use crate::weil::WeilAlgebra;

/// An equivariant degree-1 assignment, one element per Lie basis index.
#[derive(Debug, Clone)]
pub struct Connection {
    pub theta: Vec<Element>,
}

impl Connection {
    pub fn new(op: &Operation, theta: Vec<Element>) -> Result<Self, KernelError> {
        if theta.len() != op.dim() {
            return Err(KernelError::Dimension {
                expected: op.dim(),
                found: theta.len(),
            });
        }
        for t in &theta {
            if t.algebra().id() != op.algebra.id() {
                return Err(KernelError::AlgebraMismatch);
            }
            if !t.is_zero_or_homogeneous_of(1) {
                return Err(KernelError::Invalid(format!(
                    "connection component {} is not homogeneous of degree 1",
                    t.render()
                )));
            }
        }
        Ok(Self { theta })
    }

    /// The tautological connection `th^i -> th^i (x) 1` on a Weil algebra or
    /// anything containing its theta generators by name.
    pub fn tautological(weil: &WeilAlgebra, op: &Operation) -> Result<Self, KernelError> {
        let theta = (0..op.dim())
            .map(|i| {
                let name = &weil.op.algebra.generator(i).name;
                Element::generator_named(&op.algebra, name)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(op, theta)
    }
}

/// A failed connection axiom with its exact residual.
#[derive(Debug, Clone)]
pub struct ConnectionViolation {
    pub axiom: String,
    pub residual: String,
}

impl std::fmt::Display for ConnectionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: residual {}", self.axiom, self.residual)
    }
}

/// Verify `(conn1) I_j theta~^k = delta^k_j` and
/// `(conn2) L_k theta~^i = -C^i_{kj} theta~^j` exactly.
pub fn check_connection(
    op: &Operation,
    conn: &Connection,
) -> Result<Vec<ConnectionViolation>, KernelError> {
    let n = op.dim();
    let mut out = Vec::new();
    for j in 0..n {
        for k in 0..n {
            let delta = if j == k {
                Element::one(&op.algebra)
            } else {
                Element::zero(&op.algebra)
            };
            let residual = op.contraction[j].evaluate(&conn.theta[k])?.sub(&delta)?;
            if !residual.is_zero() {
                out.push(ConnectionViolation {
                    axiom: format!("(conn1) I_{} theta~^{}", j + 1, k + 1),
                    residual: residual.render(),
                });
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            let mut rhs = Element::zero(&op.algebra);
            for j in 0..n {
                let c = op.lie.bracket_coeff(i, k, j);
                if !c.is_zero() {
                    rhs = rhs.add(&conn.theta[j].scale(&-c.clone()))?;
                }
            }
            let residual = op.lie_derivative[k].evaluate(&conn.theta[i])?.sub(&rhs)?;
            if !residual.is_zero() {
                out.push(ConnectionViolation {
                    axiom: format!("(conn2) L_{} theta~^{}", k + 1, i + 1),
                    residual: residual.render(),
                });
            }
        }
    }
    Ok(out)
}

/// Curvature components from raw pieces (also used for the line-extended
/// algebra, where no `Operation` value exists): for each `i`,
/// `om^i = d theta^i + 1/2 C^i_{jk} theta^j theta^k`, verified horizontal
/// against the supplied contractions.
pub fn curvature_elements(
    d: &Derivation,
    contraction: &[Derivation],
    lie: &LieAlgebraData,
    theta: &[Element],
) -> Result<Vec<Element>, KernelError> {
    let n = lie.dim;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut om = d.evaluate(&theta[i])?;
        for j in 0..n {
            for k in 0..n {
                let c = lie.bracket_coeff(i, j, k);
                if !c.is_zero() {
                    om = om.add(&theta[j].mul(&theta[k])?.scale(&(rat(1, 2) * c)))?;
                }
            }
        }
        out.push(om);
    }
    for (i, om) in out.iter().enumerate() {
        for (k, iota) in contraction.iter().enumerate() {
            let res = iota.evaluate(om)?;
            if !res.is_zero() {
                return Err(KernelError::Inconsistency(format!(
                    "curvature component {} is not horizontal: I_{} gives {}",
                    i + 1,
                    k + 1,
                    res.render()
                )));
            }
        }
    }
    Ok(out)
}

/// Curvature of a checked connection; horizontality failures indicate a
/// broken operation and surface as inconsistencies.
pub fn curvature(op: &Operation, conn: &Connection) -> Result<Vec<Element>, KernelError> {
    curvature_elements(&op.d, &op.contraction, &op.lie, &conn.theta)
}

/// The horizontal projection `h = prod_k (1 - theta~^k I_k)`, factors in
/// ascending index order (they commute).
pub fn horizontal_projection_op(
    op: &Operation,
    conn: &Connection,
) -> Result<LinearOperator, KernelError> {
    let mut h = LinearOperator::identity(&op.algebra);
    for k in 0..op.dim() {
        let m_k = LinearOperator::left_mul(&conn.theta[k])?
            .compose(&op.contraction[k].to_operator())?;
        let factor = LinearOperator::identity(&op.algebra).sub(&m_k)?;
        h = factor.compose(&h)?;
    }
    Ok(h)
}

pub fn horizontal_projection(
    op: &Operation,
    conn: &Connection,
    a: &Element,
) -> Result<Element, KernelError> {
    horizontal_projection_op(op, conn)?.apply(a)
}

/// Covariant derivative `nabla a = h(d a)`.
pub fn covariant_derivative(
    op: &Operation,
    conn: &Connection,
    a: &Element,
) -> Result<Element, KernelError> {
    let da = op.d.evaluate(a)?;
    horizontal_projection(op, conn, &da)
}

/// The Chern-Weil morphism `W_g -> A` of a connection.
pub fn chern_weil(
    weil: &WeilAlgebra,
    op: &Operation,
    conn: &Connection,
) -> Result<AlgebraHom, KernelError> {
    let om = curvature(op, conn)?;
    let mut images = Vec::with_capacity(2 * op.dim());
    images.extend(conn.theta.iter().cloned());
    images.extend(om);
    AlgebraHom::new(&weil.op.algebra, &op.algebra, images)
}

/// First window monomial where the Chern-Weil map fails to intertwine one
/// of `d`, `L_k`, `I_k`.
pub fn chern_weil_morphism_witness(
    weil: &WeilAlgebra,
    op: &Operation,
    conn: &Connection,
    window: i64,
) -> Result<Option<(String, String, String)>, KernelError> {
    let cw = chern_weil(weil, op, conn)?;
    let wa = &weil.op.algebra;
    for k in 0..=window {
        for m in wa.basis_of_degree(k)? {
            let w = Element::monomial(wa, m);
            let checks: Vec<(String, Element, Element)> = {
                let mut v = Vec::new();
                v.push((
                    "d".to_string(),
                    cw.apply(&weil.op.d.evaluate(&w)?)?,
                    op.d.evaluate(&cw.apply(&w)?)?,
                ));
                for i in 0..op.dim() {
                    v.push((
                        format!("L_{}", i + 1),
                        cw.apply(&weil.op.lie_derivative[i].evaluate(&w)?)?,
                        op.lie_derivative[i].evaluate(&cw.apply(&w)?)?,
                    ));
                    v.push((
                        format!("I_{}", i + 1),
                        cw.apply(&weil.op.contraction[i].evaluate(&w)?)?,
                        op.contraction[i].evaluate(&cw.apply(&w)?)?,
                    ));
                }
                v
            };
            for (name, lhs, rhs) in checks {
                let residual = lhs.sub(&rhs)?;
                if !residual.is_zero() {
                    return Ok(Some((name, w.render(), residual.render())));
                }
            }
        }
    }
    Ok(None)
}

/// `Q[t] + Q[t] dt` tensored onto an operation: `t` is even of degree 0,
/// `dt` odd of degree 1, `d^(t) = dt`, and the group structure maps ignore
/// the line factor (`L = 1 (x) L`, `I = eps (x) I`).
#[derive(Debug, Clone)]
pub struct LineExtension {
    pub base: Operation,
    pub algebra: Arc<Algebra>,
    pub incl: AlgebraHom,
    pub d_hat: Derivation,
    pub lie_derivative: Vec<Derivation>,
    pub contraction: Vec<Derivation>,
}

const T_IDX: usize = 0;
const DT_IDX: usize = 1;

impl LineExtension {
    pub fn new(op: &Operation) -> Result<Self, KernelError> {
        let line = Algebra::new(vec![
            GeneratorSpec::new("t", 0),
            GeneratorSpec::new("dt", 1),
        ])?;
        let algebra = Algebra::tensor(&line, &op.algebra)?;
        let incl = AlgebraHom::inclusion_by_name(&op.algebra, &algebra)?;
        let a_count = op.algebra.generator_count();

        let mut d_images = vec![Element::zero(&algebra); 2 + a_count];
        d_images[T_IDX] = Element::generator(&algebra, DT_IDX)?;
        for g in 0..a_count {
            d_images[2 + g] = incl.apply(op.d.image(g))?;
        }
        let d_hat = Derivation::new(&algebra, 1, d_images)?;

        let extend = |der: &Derivation, shift: i64| -> Result<Derivation, KernelError> {
            let mut images = vec![Element::zero(&algebra); 2 + a_count];
            for g in 0..a_count {
                images[2 + g] = incl.apply(der.image(g))?;
            }
            Derivation::new(&algebra, shift, images)
        };
        let lie_derivative = op
            .lie_derivative
            .iter()
            .map(|l| extend(l, 0))
            .collect::<Result<Vec<_>, _>>()?;
        let contraction = op
            .contraction
            .iter()
            .map(|i| extend(i, -1))
            .collect::<Result<Vec<_>, _>>()?;

        Ok(Self {
            base: op.clone(),
            algebra,
            incl,
            d_hat,
            lie_derivative,
            contraction,
        })
    }

    pub fn t(&self) -> Element {
        Element::generator(&self.algebra, T_IDX).expect("t")
    }

    fn strip_line(&self, m: &Monomial) -> (u32, bool, Monomial) {
        let t_exp = m
            .powers
            .iter()
            .find(|&&(i, _)| i == T_IDX)
            .map(|&(_, e)| e)
            .unwrap_or(0);
        let has_dt = m.exterior.contains(&DT_IDX);
        let base_mono = Monomial {
            exterior: m
                .exterior
                .iter()
                .filter(|&&i| i != DT_IDX)
                .map(|&i| i - 2)
                .collect(),
            powers: m
                .powers
                .iter()
                .filter(|&&(i, _)| i != T_IDX)
                .map(|&(i, e)| (i - 2, e))
                .collect(),
        };
        (t_exp, has_dt, base_mono)
    }

    /// Localization at `t = value`, `dt -> 0`, into the base algebra.
    pub fn localize(&self, e: &Element, value: u8) -> Result<Element, KernelError> {
        let mut out = Element::zero(&self.base.algebra);
        for (m, c) in e.terms() {
            let (t_exp, has_dt, base_mono) = self.strip_line(m);
            if has_dt {
                continue;
            }
            if value == 0 && t_exp > 0 {
                continue;
            }
            out = out.add(&Element::from_terms(&self.base.algebra, [(base_mono, c.clone())]))?;
        }
        Ok(out)
    }

    /// Fiber integration `t^k dt (x) w -> w / (k+1)`, terms without `dt`
    /// integrate to zero. In normal form `dt` is the leading odd factor, so
    /// no sign appears when it is stripped.
    pub fn fiber_integrate(&self, e: &Element) -> Result<Element, KernelError> {
        let mut out = Element::zero(&self.base.algebra);
        for (m, c) in e.terms() {
            let (t_exp, has_dt, base_mono) = self.strip_line(m);
            if !has_dt {
                continue;
            }
            let coeff = c.clone() / rat_int(t_exp as i64 + 1);
            out = out.add(&Element::from_terms(&self.base.algebra, [(base_mono, coeff)]))?;
        }
        Ok(out)
    }
}

/// The transgression data of a pair of connections: the interpolated
/// connection on the line extension, its curvature, and the homotopy
/// `K = fiber integral of the interpolated Chern-Weil map`, satisfying
/// `cw_1(w) - cw_0(w) = d K(w) + K(d_W w)`.
#[derive(Debug, Clone)]
pub struct Transgression {
    pub weil: WeilAlgebra,
    pub ext: LineExtension,
    pub conn0: Connection,
    pub conn1: Connection,
    pub theta_hat: Vec<Element>,
    pub cw_hat: AlgebraHom,
    pub cw0: AlgebraHom,
    pub cw1: AlgebraHom,
}

impl Transgression {
    pub fn new(
        weil: &WeilAlgebra,
        op: &Operation,
        conn0: &Connection,
        conn1: &Connection,
    ) -> Result<Self, KernelError> {
        for conn in [conn0, conn1] {
            let violations = check_connection(op, conn)?;
            if let Some(v) = violations.first() {
                return Err(KernelError::Invalid(format!(
                    "transgression requires valid connections: {v}"
                )));
            }
        }
        let ext = LineExtension::new(op)?;
        let t = ext.t();
        let one_minus_t = Element::one(&ext.algebra).sub(&t)?;
        let theta_hat = (0..op.dim())
            .map(|i| {
                let a0 = ext.incl.apply(&conn0.theta[i])?;
                let a1 = ext.incl.apply(&conn1.theta[i])?;
                one_minus_t.mul(&a0)?.add(&t.mul(&a1)?)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let omega_hat =
            curvature_elements(&ext.d_hat, &ext.contraction, &op.lie, &theta_hat)?;
        let mut images = Vec::with_capacity(2 * op.dim());
        images.extend(theta_hat.iter().cloned());
        images.extend(omega_hat);
        let cw_hat = AlgebraHom::new(&weil.op.algebra, &ext.algebra, images)?;
        let cw0 = chern_weil(weil, op, conn0)?;
        let cw1 = chern_weil(weil, op, conn1)?;
        Ok(Self {
            weil: weil.clone(),
            ext,
            conn0: conn0.clone(),
            conn1: conn1.clone(),
            theta_hat,
            cw_hat,
            cw0,
            cw1,
        })
    }

    /// `K(w)`, one degree lower than `w`.
    pub fn k(&self, w: &Element) -> Result<Element, KernelError> {
        self.ext.fiber_integrate(&self.cw_hat.apply(w)?)
    }

    /// First Weil monomial of degree `<= window` violating
    /// `cw_1 - cw_0 = d K + K d_W`.
    pub fn homotopy_witness(
        &self,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        let wa = &self.weil.op.algebra;
        for deg in 0..=window {
            for m in wa.basis_of_degree(deg)? {
                let w = Element::monomial(wa, m);
                let lhs = self.cw1.apply(&w)?.sub(&self.cw0.apply(&w)?)?;
                let rhs = self
                    .ext
                    .base
                    .d
                    .evaluate(&self.k(&w)?)?
                    .add(&self.k(&self.weil.op.d.evaluate(&w)?)?)?;
                let residual = lhs.sub(&rhs)?;
                if !residual.is_zero() {
                    return Ok(Some((w.render(), residual.render())));
                }
            }
        }
        Ok(None)
    }

    /// `K` is a basic homotopy: it commutes with the Lie derivatives and
    /// maps basic Weil elements to basic elements of the base.
    pub fn basic_homotopy_witness(
        &self,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        let wa = &self.weil.op.algebra;
        let base = &self.ext.base;
        for deg in 0..=window {
            for m in wa.basis_of_degree(deg)? {
                let w = Element::monomial(wa, m);
                for i in 0..base.dim() {
                    let lhs = self.k(&self.weil.op.lie_derivative[i].evaluate(&w)?)?;
                    let rhs = base.lie_derivative[i].evaluate(&self.k(&w)?)?;
                    let residual = lhs.sub(&rhs)?;
                    if !residual.is_zero() {
                        return Ok(Some((
                            format!("[K, L_{}] on {}", i + 1, w.render()),
                            residual.render(),
                        )));
                    }
                }
            }
            for w in self
                .weil
                .op
                .subspace_basis(crate::operation::SubspaceKind::Basic, deg)?
            {
                let kw = self.k(&w)?;
                if !base.is_basic(&kw)? {
                    return Ok(Some((
                        format!("K({}) is not basic", w.render()),
                        kw.render(),
                    )));
                }
            }
        }
        Ok(None)
    }

    /// The localizations of the interpolated Chern-Weil map recover the
    /// endpoint maps: `Psi_i . cw_hat = cw_i` on the window.
    pub fn localization_witness(
        &self,
        window: i64,
    ) -> Result<Option<(String, String)>, KernelError> {
        let wa = &self.weil.op.algebra;
        for deg in 0..=window {
            for m in wa.basis_of_degree(deg)? {
                let w = Element::monomial(wa, m);
                let hat = self.cw_hat.apply(&w)?;
                for (value, cw) in [(0u8, &self.cw0), (1u8, &self.cw1)] {
                    let residual = self.ext.localize(&hat, value)?.sub(&cw.apply(&w)?)?;
                    if !residual.is_zero() {
                        return Ok(Some((
                            format!("Psi_{value} on {}", w.render()),
                            residual.render(),
                        )));
                    }
                }
            }
        }
        Ok(None)
    }
}
