use linvar_core::f2::{F2Matrix, F2Vector};
use linvar_core::systems::{validate, Degeneracy, Family, Generator, InducedSystem, Reduction, Validated};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// `{"rows": ["111"], "sigma": "111"}`; bit strings list coordinate 1 first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub rows: Vec<String>,
    pub sigma: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub name: String,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_k: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    #[serde(default)]
    pub systems: Vec<SystemSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<GeneratorSpec>,
}

/// A validated system together with the substitutions that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParsedSystem {
    pub system: InducedSystem,
    pub reductions: Vec<Reduction>,
}

fn describe(kind: &Degeneracy) -> String {
    match kind {
        Degeneracy::ValueForced { coordinate } => {
            format!("degenerate system: the relations force x{coordinate} = 0")
        }
        Degeneracy::TriviallyFree { i, j } => {
            format!("degenerate system: x{i} = x{j} is forced but sigma differs there, so nothing induces it")
        }
        Degeneracy::Collapsed { matrix, sigma } => {
            format!("degenerate system: substitutions leave fewer than three variables ({matrix}, {sigma})")
        }
    }
}

pub fn system_from_spec(spec: &SystemSpec) -> Result<ParsedSystem> {
    if spec.rows.is_empty() {
        return Err(CliError::Input("a system needs at least one row".into()));
    }
    let k = spec.rows[0].len();
    if let Some(r) = spec.rows.iter().find(|r| r.len() != k) {
        return Err(CliError::Input(format!("row {r:?} has length {}, expected {k}", r.len())));
    }
    if spec.sigma.len() != k {
        return Err(CliError::Input(format!("sigma has length {}, but rows have length {k}", spec.sigma.len())));
    }
    let matrix = F2Matrix::parse_rows(&spec.rows)?;
    let sigma = F2Vector::parse_bits(&spec.sigma)?;
    match validate(&matrix, &sigma)? {
        Validated::System { system, reductions } => Ok(ParsedSystem { system, reductions }),
        Validated::Degenerate { kind, .. } => Err(CliError::Input(describe(&kind))),
    }
}

pub fn spec_of(sys: &InducedSystem) -> SystemSpec {
    SystemSpec { rows: sys.matrix().to_row_strings(), sigma: sys.sigma_vector().to_string() }
}

fn json_error(what: &str, e: serde_json::Error) -> CliError {
    CliError::Input(format!("invalid {what} JSON: {e}"))
}

pub fn parse_system(json: &str) -> Result<ParsedSystem> {
    let spec: SystemSpec = serde_json::from_str(json).map_err(|e| json_error("system", e))?;
    system_from_spec(&spec)
}

fn generator(spec: &GeneratorSpec) -> Result<Generator> {
    match spec.name.as_str() {
        "rm" => Ok(Generator::ReedMuller { d: spec.d, max_k: spec.max_k }),
        other => Err(CliError::Input(format!("unknown generator {other:?}"))),
    }
}

/// A family object, or a single system object treated as a one-member family.
pub fn parse_family(json: &str) -> Result<Family> {
    let value: serde_json::Value = serde_json::from_str(json).map_err(|e| json_error("family", e))?;
    if value.get("rows").is_some() {
        return Ok(Family::single(parse_system(json)?.system));
    }
    let spec: FamilySpec = serde_json::from_value(value).map_err(|e| json_error("family", e))?;
    let explicit = spec
        .systems
        .iter()
        .map(|s| system_from_spec(s).map(|p| p.system))
        .collect::<Result<Vec<_>>>()?;
    let mut fam = Family::new(explicit);
    for g in &spec.generators {
        fam = fam.with_generator(generator(g)?);
    }
    fam.realize()?;
    Ok(fam)
}

pub fn family_spec(fam: &Family) -> Result<FamilySpec> {
    Ok(FamilySpec { systems: fam.realize()?.iter().map(spec_of).collect(), generators: Vec::new() })
}

/// Reads `@path` arguments from disk; anything else is taken literally.
fn inline_or_file(arg: &str) -> Result<String> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn system_arg(arg: &str) -> Result<ParsedSystem> {
    parse_system(&inline_or_file(arg)?)
}

/// `rm:<d>`, inline JSON, or `@path` to a JSON file.
pub fn family_arg(arg: &str) -> Result<Family> {
    if let Some(d) = arg.strip_prefix("rm:") {
        let d = d.parse().map_err(|_| CliError::Input(format!("bad degree in {arg:?}")))?;
        return Ok(linvar_core::families::rm_family(d)?);
    }
    parse_family(&inline_or_file(arg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let p = parse_system(r#"{"rows":["111"],"sigma":"111"}"#).unwrap();
        assert_eq!((p.system.k(), p.system.m(), p.system.sigma()), (3, 1, 7));
        assert!(p.reductions.is_empty());
    }

    #[test]
    fn generator_family() {
        let fam = parse_family(r#"{"generators":[{"name":"rm","d":1}]}"#).unwrap();
        let rm = linvar_core::families::rm_family(1).unwrap();
        assert_eq!(fam.realize().unwrap(), rm.realize().unwrap());
        assert_eq!(family_arg("rm:1").unwrap().realize().unwrap(), rm.realize().unwrap());
        let capped = parse_family(r#"{"generators":[{"name":"rm","d":1,"max_k":3}]}"#).unwrap();
        assert!(capped.realize().unwrap().is_empty());
    }

    #[test]
    fn schema_errors_are_input_errors() {
        for bad in [
            r#"{"rows":["111"],"sigma":"11"}"#,
            r#"{"rows":["111","11"],"sigma":"111"}"#,
            r#"{"rows":[],"sigma":"111"}"#,
            r#"{"rows":["121"],"sigma":"111"}"#,
            r#"{"rows":["111"]}"#,
            r#"{"rows":["111"],"sigma":"111","extra":1}"#,
            r#"not json"#,
        ] {
            assert!(matches!(parse_system(bad), Err(CliError::Input(_))), "{bad}");
        }
        assert!(matches!(parse_family(r#"{"generators":[{"name":"xx","d":1}]}"#), Err(CliError::Input(_))));
    }

    #[test]
    fn degenerate_systems_are_reported() {
        let e = parse_system(r#"{"rows":["100"],"sigma":"100"}"#).unwrap_err();
        assert!(e.to_string().contains("degenerate"));
        assert_eq!(e.exit_code(), 2);
        let e = parse_system(r#"{"rows":["1100"],"sigma":"1000"}"#).unwrap_err();
        assert!(e.to_string().contains("x1 = x2"), "{e}");
    }

    #[test]
    fn specs_round_trip() {
        let fam = linvar_core::families::rm_family(2).unwrap();
        let json = serde_json::to_string(&family_spec(&fam).unwrap()).unwrap();
        assert_eq!(parse_family(&json).unwrap().realize().unwrap(), fam.realize().unwrap());
    }
}
