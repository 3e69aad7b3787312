//! JSON model files: a Lie algebra with optional ideal, an optional
//! operation (generator degrees plus `d`/`L`/`I` images in the element
//! grammar), optional connections, and optional named invariant
//! polynomials in the Cartan variables.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

use serde::Deserialize;

use cartan_core::algebra::{Algebra, Element, GeneratorSpec};
use cartan_core::derivation::Derivation;
use cartan_core::lie::{IdealSpec, LieAlgebraData};
use cartan_core::operation::Operation;
use cartan_core::parse::parse_element;
use cartan_core::scalar::Rational;

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub lie_algebra: LieAlgebraSection,
    #[serde(default)]
    pub ideal: Option<Vec<usize>>,
    #[serde(default)]
    pub operation: Option<OperationSection>,
    #[serde(default)]
    pub connection: Option<Vec<String>>,
    #[serde(default)]
    pub connections: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub polynomials: BTreeMap<String, String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraSection {
    pub basis: Vec<String>,
    /// Sparse triples `[i, j, k, value]`, 1-based, `j < k`; antisymmetric
    /// completion is implied.
    #[serde(default)]
    pub structure_constants: Vec<(usize, usize, usize, String)>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperationSection {
    pub generators: Vec<GeneratorSection>,
    pub d: BTreeMap<String, String>,
    pub lie_derivative: Vec<BTreeMap<String, String>>,
    pub contraction: Vec<BTreeMap<String, String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSection {
    pub name: String,
    pub degree: u32,
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    Rational::from_str(text.trim())
        .map_err(|e| CliError::input(format!("bad rational `{text}`: {e}")))
}

pub struct LoadedModel {
    pub lie: Arc<LieAlgebraData>,
    pub ideal: Option<IdealSpec>,
    pub operation: Option<Operation>,
    pub connection: Option<Vec<Element>>,
    pub connections: BTreeMap<String, Vec<Element>>,
    pub polynomials: BTreeMap<String, String>,
}

impl ModelFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::input(format!("model file: {e}")))
    }

    pub fn load(&self) -> Result<LoadedModel, CliError> {
        let dim = self.lie_algebra.basis.len();
        if dim == 0 {
            return Err(CliError::input("lie_algebra.basis must be nonempty"));
        }
        // dense constants from sparse triples; the mirror of an entry is
        // filled in by antisymmetry unless the file sets it explicitly (so
        // a file *can* describe broken antisymmetry for `validate`)
        let mut c = vec![vec![vec![Rational::from_integer(0.into()); dim]; dim]; dim];
        let mut explicit = std::collections::HashSet::new();
        for (i, j, k, v) in &self.lie_algebra.structure_constants {
            if *i == 0 || *j == 0 || *k == 0 {
                return Err(CliError::input(
                    "structure constant indices are 1-based; found 0",
                ));
            }
            if *i > dim || *j > dim || *k > dim {
                return Err(CliError::input(format!(
                    "structure constant index out of range in [{i}, {j}, {k}]"
                )));
            }
            c[i - 1][j - 1][k - 1] = parse_rational(v)?;
            explicit.insert((i - 1, j - 1, k - 1));
        }
        for (i, j, k, _) in &self.lie_algebra.structure_constants {
            let (i, j, k) = (i - 1, j - 1, k - 1);
            if !explicit.contains(&(i, k, j)) {
                c[i][k][j] = -c[i][j][k].clone();
            }
        }
        let lie = LieAlgebraData::new(self.lie_algebra.basis.clone(), c)
            .map_err(CliError::kernel)?;

        let ideal = match &self.ideal {
            None => None,
            Some(indices) => {
                if indices.iter().any(|&i| i == 0) {
                    return Err(CliError::input("ideal indices are 1-based; found 0"));
                }
                let zero_based: Vec<usize> = indices.iter().map(|&i| i - 1).collect();
                Some(IdealSpec::new(&lie, zero_based).map_err(CliError::kernel)?)
            }
        };

        let operation = match &self.operation {
            None => None,
            Some(section) => Some(build_operation(&lie, section)?),
        };

        let parse_theta = |op: &Operation, raw: &[String]| -> Result<Vec<Element>, CliError> {
            raw.iter()
                .map(|s| parse_element(s, &op.algebra).map_err(CliError::kernel))
                .collect()
        };
        let connection = match (&self.connection, &operation) {
            (None, _) => None,
            (Some(_), None) => {
                return Err(CliError::input(
                    "a connection requires an operation section",
                ))
            }
            (Some(raw), Some(op)) => Some(parse_theta(op, raw)?),
        };
        let mut connections = BTreeMap::new();
        for (name, raw) in &self.connections {
            let Some(op) = &operation else {
                return Err(CliError::input(
                    "named connections require an operation section",
                ));
            };
            connections.insert(name.clone(), parse_theta(op, raw)?);
        }

        Ok(LoadedModel {
            lie,
            ideal,
            operation,
            connection,
            connections,
            polynomials: self.polynomials.clone(),
        })
    }
}

fn image_map(
    algebra: &Arc<Algebra>,
    map: &BTreeMap<String, String>,
    what: &str,
) -> Result<Vec<Element>, CliError> {
    for name in map.keys() {
        if algebra.find(name).is_none() {
            return Err(CliError::input(format!(
                "{what} maps unknown generator `{name}`"
            )));
        }
    }
    algebra
        .generators()
        .iter()
        .map(|g| {
            let text = map.get(&g.name).ok_or_else(|| {
                CliError::input(format!(
                    "{what} is missing an image for generator `{}` (use \"0\")",
                    g.name
                ))
            })?;
            parse_element(text, algebra).map_err(CliError::kernel)
        })
        .collect()
}

fn build_operation(
    lie: &Arc<LieAlgebraData>,
    section: &OperationSection,
) -> Result<Operation, CliError> {
    let gens = section
        .generators
        .iter()
        .map(|g| GeneratorSpec::new(g.name.clone(), g.degree))
        .collect();
    let algebra = Algebra::new(gens).map_err(CliError::kernel)?;
    if section.lie_derivative.len() != lie.dim || section.contraction.len() != lie.dim {
        return Err(CliError::input(format!(
            "operation needs one lie_derivative and one contraction map per basis vector ({})",
            lie.dim
        )));
    }
    let d = Derivation::new(&algebra, 1, image_map(&algebra, &section.d, "d")?)
        .map_err(CliError::kernel)?;
    let lie_derivative = section
        .lie_derivative
        .iter()
        .enumerate()
        .map(|(i, m)| {
            Derivation::new(
                &algebra,
                0,
                image_map(&algebra, m, &format!("lie_derivative[{}]", i + 1))?,
            )
            .map_err(CliError::kernel)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let contraction = section
        .contraction
        .iter()
        .enumerate()
        .map(|(i, m)| {
            Derivation::new(
                &algebra,
                -1,
                image_map(&algebra, m, &format!("contraction[{}]", i + 1))?,
            )
            .map_err(CliError::kernel)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Operation::new(algebra, Arc::clone(lie), d, lie_derivative, contraction)
        .map_err(CliError::kernel)
}

impl LoadedModel {
    pub fn require_operation(&self) -> Result<&Operation, CliError> {
        self.operation
            .as_ref()
            .ok_or_else(|| CliError::input("this command requires an operation section"))
    }

    pub fn require_connection(&self) -> Result<&Vec<Element>, CliError> {
        self.connection
            .as_ref()
            .ok_or_else(|| CliError::input("this command requires a connection"))
    }
}
