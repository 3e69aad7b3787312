//! One function per subcommand; each returns a `Report` whose failed
//! checks drive the exit code.

use std::collections::BTreeMap;

use cartan_core::algebra::Element;
use cartan_core::cartan::{seeded_t_matrix, CartanModel, KalkmanFamily};
use cartan_core::connection::{check_connection, Connection, Transgression};
use cartan_core::lie::IdealSpec;
use cartan_core::operation::Operation;
use cartan_core::parse::parse_element;
use cartan_core::reduction::{Reduction, ReductionSetup};
use cartan_core::scalar::{render_rational, Rational};
use cartan_core::weil::{build_weil, koszul_check};
use cartan_core::KernelError;

use crate::model::LoadedModel;
use crate::report::Report;
use crate::CliError;

fn axiom_check(report: &mut Report, name: &str, op: &Operation, window: i64) -> Result<(), CliError> {
    let violations = op.check_axioms(window).map_err(CliError::kernel)?;
    match violations.first() {
        None => report.check(format!("{name}[deg<={window}]"), None),
        Some(first) => report.check(
            format!("{name}[deg<={window}]"),
            Some(format!("{first} ({} violations)", violations.len())),
        ),
    }
    Ok(())
}

fn connection_check(
    report: &mut Report,
    name: &str,
    op: &Operation,
    conn: &Connection,
) -> Result<(), CliError> {
    let violations = check_connection(op, conn).map_err(CliError::kernel)?;
    match violations.first() {
        None => report.check(name, None),
        Some(first) => report.check(
            name,
            Some(format!("{first} ({} violations)", violations.len())),
        ),
    }
    Ok(())
}

pub fn validate(model: &LoadedModel, max_degree: i64, report: &mut Report) -> Result<(), CliError> {
    match model.lie.validate() {
        Ok(()) => report.check("lie-identities", None),
        Err(v) => report.check("lie-identities", Some(v.to_string())),
    }
    if let Some(ideal) = &model.ideal {
        match ideal.validate(&model.lie) {
            Ok(()) => report.check("ideal-condition", None),
            Err(v) => report.check("ideal-condition", Some(v.to_string())),
        }
    }
    if report.failed() {
        return Ok(());
    }
    if let Some(op) = &model.operation {
        axiom_check(report, "operation-axioms", op, max_degree)?;
    }
    if let Some(theta) = &model.connection {
        let op = model.require_operation()?;
        match &model.ideal {
            None => {
                let conn = Connection::new(op, theta.clone()).map_err(CliError::kernel)?;
                connection_check(report, "connection-axioms", op, &conn)?;
            }
            Some(ideal) => {
                // the full N-connection validation happens while building
                // the reduction data
                let setup = ReductionSetup {
                    op: op.clone(),
                    ideal: ideal.clone(),
                    theta: theta.clone(),
                };
                match Reduction::new(setup) {
                    Ok(_) => report.check("n-connection-axioms", None),
                    Err(e) => report.check("n-connection-axioms", Some(e.to_string())),
                }
            }
        }
    }
    Ok(())
}

pub fn weil(model: &LoadedModel, max_degree: i64, report: &mut Report) -> Result<(), CliError> {
    match model.lie.validate() {
        Ok(()) => report.check("lie-identities", None),
        Err(v) => {
            report.check("lie-identities", Some(v.to_string()));
            return Ok(());
        }
    }
    let w = build_weil(&model.lie).map_err(CliError::kernel)?;
    axiom_check(report, "weil-axioms", &w.op, max_degree.min(4))?;
    match koszul_check(&model.lie, max_degree).map_err(CliError::kernel)? {
        None => report.check(format!("koszul-formula[deg<={max_degree}]"), None),
        Some((m, r)) => report.check(
            format!("koszul-formula[deg<={max_degree}]"),
            Some(format!("on {m}: residual {r}")),
        ),
    }
    let conn = Connection::tautological(&w, &w.op).map_err(CliError::kernel)?;
    connection_check(report, "tautological-connection", &w.op, &conn)?;
    let dims = w.acyclicity_dims(max_degree).map_err(CliError::kernel)?;
    let mut expected = vec![0usize; max_degree as usize + 1];
    expected[0] = 1;
    report.check_eq("acyclicity", &dims, &expected);
    report.dims("weil-full", dims);
    Ok(())
}

pub enum CohomologyKind {
    Cartan,
    WeilBasic,
}

pub fn cohomology(
    model: &LoadedModel,
    kind: &CohomologyKind,
    max_degree: i64,
    report: &mut Report,
) -> Result<(), CliError> {
    let op = model.require_operation()?;
    match kind {
        CohomologyKind::Cartan => {
            let cartan = CartanModel::new(op, "Om").map_err(CliError::kernel)?;
            let dims = cartan.cohomology_dims(max_degree).map_err(CliError::kernel)?;
            report.dims("cartan", dims);
        }
        CohomologyKind::WeilBasic => {
            let w = build_weil(&model.lie).map_err(CliError::kernel)?;
            let tensor =
                cartan_core::operation::tensor_product(&w.op, op).map_err(CliError::kernel)?;
            let dims = tensor
                .basic_cohomology_dims(max_degree)
                .map_err(CliError::kernel)?;
            report.dims("weil-basic", dims);
        }
    }
    Ok(())
}

pub enum TSpec {
    Identity,
    Zero,
    Seed(u64),
}

impl TSpec {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "identity" => Ok(TSpec::Identity),
            "zero" => Ok(TSpec::Zero),
            other => match other.strip_prefix("seed:") {
                Some(seed) => seed
                    .parse()
                    .map(TSpec::Seed)
                    .map_err(|e| CliError::input(format!("bad seed `{seed}`: {e}"))),
                None => Err(CliError::input(format!(
                    "--t must be identity, zero or seed:<int>, got `{other}`"
                ))),
            },
        }
    }

    fn matrix(&self, n: usize) -> Vec<Vec<Rational>> {
        match self {
            TSpec::Identity => KalkmanFamily::identity_t(n),
            TSpec::Zero => KalkmanFamily::zero_t(n),
            TSpec::Seed(seed) => seeded_t_matrix(n, *seed),
        }
    }
}

pub fn kalkman(
    model: &LoadedModel,
    t_spec: &TSpec,
    max_degree: i64,
    report: &mut Report,
) -> Result<(), CliError> {
    let op = model.require_operation()?;
    let w = build_weil(&model.lie).map_err(CliError::kernel)?;
    let n = model.lie.dim;
    let t = t_spec.matrix(n);
    if let TSpec::Seed(seed) = t_spec {
        report.value("t-seed", seed.to_string());
    }
    let rendered: Vec<String> = t
        .iter()
        .map(|row| {
            row.iter()
                .map(render_rational)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    report.value("t-matrix", rendered.join("; "));
    let fam = KalkmanFamily::new(&w, op, t).map_err(CliError::kernel)?;
    report.value(
        "t-intertwines-bracket",
        if fam.t_intertwines_bracket() { "yes" } else { "no" },
    );
    axiom_check(report, "tensor-axioms", &fam.tensor, max_degree)?;
    match fam.conjugation_witness(max_degree).map_err(CliError::kernel)? {
        None => report.check(format!("kalkman-conjugation[deg<={max_degree}]"), None),
        Some((m, r)) => report.check(
            format!("kalkman-conjugation[deg<={max_degree}]"),
            Some(format!("on {m}: residual {r}")),
        ),
    }
    match fam
        .exact_conjugation_witness(max_degree)
        .map_err(CliError::kernel)?
    {
        None => report.check(
            format!("conjugation-with-correction[deg<={max_degree}]"),
            None,
        ),
        Some((m, r)) => report.check(
            format!("conjugation-with-correction[deg<={max_degree}]"),
            Some(format!("on {m}: residual {r}")),
        ),
    }
    match fam
        .lie_invariance_witness(max_degree)
        .map_err(CliError::kernel)?
    {
        None => report.check(format!("lie-invariance[deg<={max_degree}]"), None),
        Some((m, r)) => report.check(
            format!("lie-invariance[deg<={max_degree}]"),
            Some(format!("on {m}: residual {r}")),
        ),
    }
    let pair_window = max_degree.min(3);
    match fam
        .automorphism_witness(pair_window)
        .map_err(CliError::kernel)?
    {
        None => report.check(format!("exp-automorphism[deg<={pair_window}]"), None),
        Some((m, r)) => report.check(
            format!("exp-automorphism[deg<={pair_window}]"),
            Some(format!("on {m}: residual {r}")),
        ),
    }
    Ok(())
}

pub fn transgress(
    model: &LoadedModel,
    theta0: &str,
    theta1: &str,
    max_degree: i64,
    report: &mut Report,
) -> Result<(), CliError> {
    let op = model.require_operation()?;
    let lookup = |name: &str| -> Result<Connection, CliError> {
        let raw = model.connections.get(name).ok_or_else(|| {
            CliError::input(format!("model file defines no connection named `{name}`"))
        })?;
        Connection::new(op, raw.clone()).map_err(CliError::kernel)
    };
    let c0 = lookup(theta0)?;
    let c1 = lookup(theta1)?;
    let w = build_weil(&model.lie).map_err(CliError::kernel)?;
    connection_check(report, "theta0-axioms", op, &c0)?;
    connection_check(report, "theta1-axioms", op, &c1)?;
    if report.failed() {
        return Ok(());
    }
    let trans = Transgression::new(&w, op, &c0, &c1).map_err(CliError::kernel)?;
    match trans.homotopy_witness(max_degree).map_err(CliError::kernel)? {
        None => report.check(format!("transgression-homotopy[deg<={max_degree}]"), None),
        Some((m, r)) => report.check(
            format!("transgression-homotopy[deg<={max_degree}]"),
            Some(format!("on {m}: residual {r}")),
        ),
    }
    // endpoint values from the interpolated curvature
    let mut theta_ok = None;
    let mut omega_ok = None;
    for i in 0..model.lie.dim {
        let k_theta = trans.k(&w.theta(i)).map_err(CliError::kernel)?;
        if !k_theta.is_zero() && theta_ok.is_none() {
            theta_ok = Some(format!("K(th{}) = {}", i + 1, k_theta.render()));
        }
        let k_omega = trans.k(&w.omega(i)).map_err(CliError::kernel)?;
        let expect = c1.theta[i].sub(&c0.theta[i]).map_err(CliError::kernel)?;
        if k_omega != expect && omega_ok.is_none() {
            omega_ok = Some(format!(
                "K(Om{}) = {}, expected {}",
                i + 1,
                k_omega.render(),
                expect.render()
            ));
        }
        report.value(format!("K(Om{})", i + 1), k_omega.render());
    }
    report.check("K(theta)=0", theta_ok);
    report.check("K(Omega)=theta1-theta0", omega_ok);
    match trans
        .basic_homotopy_witness(max_degree)
        .map_err(CliError::kernel)?
    {
        None => report.check(format!("basic-homotopy[deg<={max_degree}]"), None),
        Some((m, r)) => report.check(
            format!("basic-homotopy[deg<={max_degree}]"),
            Some(format!("{m}: {r}")),
        ),
    }
    match trans
        .localization_witness(max_degree)
        .map_err(CliError::kernel)?
    {
        None => report.check(format!("endpoint-localization[deg<={max_degree}]"), None),
        Some((m, r)) => report.check(
            format!("endpoint-localization[deg<={max_degree}]"),
            Some(format!("{m}: {r}")),
        ),
    }
    Ok(())
}

fn build_reduction(model: &LoadedModel) -> Result<Result<Reduction, KernelError>, CliError> {
    let op = model.require_operation()?;
    let theta = model.require_connection()?;
    let ideal = match &model.ideal {
        Some(ideal) => ideal.clone(),
        // no ideal section means G = N
        None => IdealSpec::new(&model.lie, (0..model.lie.dim).collect())
            .map_err(CliError::kernel)?,
    };
    Ok(Reduction::new(ReductionSetup {
        op: op.clone(),
        ideal,
        theta: theta.clone(),
    }))
}

fn parse_polynomials(
    red: &Reduction,
    polynomials: &BTreeMap<String, String>,
) -> Result<BTreeMap<String, Element>, CliError> {
    polynomials
        .iter()
        .map(|(name, text)| {
            let p = parse_element(text, &red.g_cartan.algebra).map_err(CliError::kernel)?;
            Ok((name.clone(), p))
        })
        .collect()
}

pub fn reduce(model: &LoadedModel, max_degree: i64, report: &mut Report) -> Result<(), CliError> {
    let red = match build_reduction(model)? {
        Ok(red) => {
            report.check("reduction-setup", None);
            red
        }
        Err(e) => {
            report.check("reduction-setup", Some(e.to_string()));
            return Ok(());
        }
    };
    report.check("moment-descent", red.descent_witness().map_err(CliError::kernel)?);
    report.check(
        "moment-equivariance",
        red.moment_equivariance_witness().map_err(CliError::kernel)?,
    );
    report.check(
        format!("t0-morphism[deg<={max_degree}]"),
        red.t0_morphism_witness(max_degree)
            .map_err(CliError::kernel)?
            .map(|(name, m, r)| format!("{name} on {m}: residual {r}")),
    );
    report.check(
        format!("t0-image[deg<={max_degree}]"),
        red.t0_image_witness(max_degree).map_err(CliError::kernel)?,
    );
    report.check(
        format!("homotopy-identity[deg<={max_degree}]"),
        red.homotopy_witness(max_degree)
            .map_err(CliError::kernel)?
            .map(|(m, r)| format!("on {m}: residual {r}")),
    );
    report.check(
        format!("kappa-basic[deg<={max_degree}]"),
        red.kappa_basic_witness(max_degree)
            .map_err(CliError::kernel)?
            .map(|(m, r)| format!("{m}: {r}")),
    );
    report.check(
        format!("t0-after-j[deg<={max_degree}]"),
        red.t0_j_witness(max_degree)
            .map_err(CliError::kernel)?
            .map(|(m, r)| format!("on {m}: residual {r}")),
    );
    report.check(
        "equivariant-curvature",
        red.equivariant_curvature_witness().map_err(CliError::kernel)?,
    );
    report.check(
        "xi-curvature-slice",
        red.xi_curvature_slice_witness()
            .map_err(CliError::kernel)?
            .map(|(m, r)| format!("{m}: {r}")),
    );
    let dims_g = red.g_basic_dims(max_degree).map_err(CliError::kernel)?;
    let dims_q = red.q_basic_dims(max_degree).map_err(CliError::kernel)?;
    report.check_eq("basic-dims-equal", &dims_g, &dims_q);
    report.dims("g-basic", dims_g);
    report.dims("q-basic", dims_q);
    for (i, omega) in red.omega_q.iter().enumerate() {
        report.value(format!("omega_Q^{}", i + 1), omega.render());
    }
    for (name, p) in parse_polynomials(&red, &model.polynomials)? {
        if !red.g_cartan.is_invariant(&p).map_err(CliError::kernel)? {
            report.check(format!("invariant({name})"), Some(p.render()));
            continue;
        }
        report.check(format!("invariant({name})"), None);
        let direct = red.reduce_cartan_rep(&p).map_err(CliError::kernel)?;
        report.value(format!("reduce({name})"), direct.render());
        let composite = red.composite_reduce(&p).map_err(CliError::kernel)?;
        let residual = direct.sub(&composite).map_err(CliError::kernel)?;
        report.check(
            format!("composite-agrees({name})"),
            (!residual.is_zero()).then(|| residual.render()),
        );
        let dp = red
            .g_cartan
            .differential
            .evaluate(&p)
            .map_err(CliError::kernel)?;
        if dp.is_zero() {
            let d_out = red
                .q_cartan_d
                .evaluate(&direct)
                .map_err(CliError::kernel)?;
            report.check(
                format!("closed-output({name})"),
                (!d_out.is_zero()).then(|| d_out.render()),
            );
        }
    }
    Ok(())
}

pub fn char_class(
    model: &LoadedModel,
    poly: &str,
    max_degree: i64,
    report: &mut Report,
) -> Result<(), CliError> {
    let red = match build_reduction(model)? {
        Ok(red) => {
            report.check("reduction-setup", None);
            red
        }
        Err(e) => {
            report.check("reduction-setup", Some(e.to_string()));
            return Ok(());
        }
    };
    let text = model
        .polynomials
        .get(poly)
        .ok_or_else(|| CliError::input(format!("model file defines no polynomial `{poly}`")))?;
    let p = parse_element(text, &red.g_cartan.algebra).map_err(CliError::kernel)?;
    match red.char_class(&p) {
        Ok(class) => {
            report.check("char-class", None);
            report.value(format!("char-class({poly})"), class.render());
            let composite = red.composite_reduce(&p).map_err(CliError::kernel)?;
            let residual = class.sub(&composite).map_err(CliError::kernel)?;
            report.check(
                format!("composite-agrees[deg<={max_degree}]"),
                (!residual.is_zero()).then(|| residual.render()),
            );
            if red.complement.is_empty() {
                let classical = red
                    .classical_chern_weil_form(&p)
                    .map_err(CliError::kernel)?;
                report.check_eq(
                    "classical-chern-weil",
                    &class.render(),
                    &classical.render(),
                );
            }
        }
        Err(e) => report.check("char-class", Some(e.to_string())),
    }
    Ok(())
}

/// Helper shared by tests and `main`: sha256 hex digest of the input bytes.
pub fn digest_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
