use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use linvar_core::boolfn::BooleanFunction;
use linvar_core::f2::F2Vector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::anf::parse_anf;
use crate::error::{CliError, Result};
use crate::table::parse_table;

/// Where a Boolean function comes from.
///
/// Accepted spellings: `const0`, `const1`, `hyperplane:<bits>` (coordinate 1
/// first), `bent`, `random:<seed>:<density>`, `anf:<expr>`, `file:<path>`.
#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSource {
    Constant(bool),
    Hyperplane(F2Vector),
    Bent,
    Random { seed: u64, density: f64 },
    Anf(String),
    File(PathBuf),
}

impl FromStr for FunctionSource {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| CliError::Input(format!("function source {s:?}: {msg}"));
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (s, None),
        };
        match (head, rest) {
            ("const0" | "constant0", None) => Ok(FunctionSource::Constant(false)),
            ("const1" | "constant1", None) => Ok(FunctionSource::Constant(true)),
            ("bent", None) => Ok(FunctionSource::Bent),
            ("hyperplane", Some(bits)) => Ok(FunctionSource::Hyperplane(F2Vector::parse_bits(bits)?)),
            ("random", Some(args)) => {
                let (seed, density) = args.split_once(':').ok_or_else(|| bad("expected random:<seed>:<density>"))?;
                let seed = seed.parse().map_err(|_| bad("seed must be an unsigned integer"))?;
                let density: f64 = density.parse().map_err(|_| bad("density must be a number"))?;
                if !(0.0..=1.0).contains(&density) {
                    return Err(bad("density must lie in [0, 1]"));
                }
                Ok(FunctionSource::Random { seed, density })
            }
            ("anf", Some(expr)) => Ok(FunctionSource::Anf(expr.to_string())),
            ("file", Some(path)) => Ok(FunctionSource::File(PathBuf::from(path))),
            _ => Err(bad("unknown source")),
        }
    }
}

impl fmt::Display for FunctionSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSource::Constant(v) => write!(f, "const{}", *v as u8),
            FunctionSource::Hyperplane(a) => write!(f, "hyperplane:{a}"),
            FunctionSource::Bent => f.write_str("bent"),
            FunctionSource::Random { seed, density } => write!(f, "random:{seed}:{density}"),
            FunctionSource::Anf(e) => write!(f, "anf:{e}"),
            FunctionSource::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl FunctionSource {
    /// Builds the function. `n` is required unless the source fixes it; when
    /// both are present they must agree.
    pub fn load(&self, n: Option<usize>) -> Result<BooleanFunction> {
        let need_n = || n.ok_or_else(|| CliError::Usage(format!("source {self} needs --n")));
        let f = match self {
            FunctionSource::Constant(v) => BooleanFunction::constant(need_n()?, *v)?,
            FunctionSource::Hyperplane(a) => BooleanFunction::hyperplane(a)?,
            FunctionSource::Bent => BooleanFunction::bent_inner_product(need_n()?)?,
            FunctionSource::Random { seed, density } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                BooleanFunction::random(need_n()?, *density, &mut rng)?
            }
            FunctionSource::Anf(expr) => parse_anf(expr, need_n()?)?,
            FunctionSource::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
                parse_table(&text)?
            }
        };
        if let Some(n) = n {
            if f.n() != n {
                return Err(CliError::Input(format!("source {self} has n = {}, but --n is {n}", f.n())));
            }
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str, n: Option<usize>) -> Result<BooleanFunction> {
        s.parse::<FunctionSource>()?.load(n)
    }

    #[test]
    fn builtins() {
        assert_eq!(load("const1", Some(3)).unwrap().ones(), 8);
        assert_eq!(load("constant0", Some(3)).unwrap().ones(), 0);
        assert_eq!(load("hyperplane:110", None).unwrap().ones(), 4);
        assert_eq!(load("bent", Some(4)).unwrap().ones(), 6);
        assert_eq!(load("anf:x1*x2", Some(2)).unwrap().ones(), 1);
    }

    #[test]
    fn random_is_seeded() {
        assert_eq!(load("random:7:0.5", Some(8)).unwrap(), load("random:7:0.5", Some(8)).unwrap());
        assert_ne!(load("random:7:0.5", Some(8)).unwrap(), load("random:8:0.5", Some(8)).unwrap());
    }

    #[test]
    fn errors() {
        assert!(matches!(load("const1", None), Err(CliError::Usage(_))));
        assert!(load("hyperplane:110", Some(4)).is_err());
        assert!(load("random:1:2.0", Some(3)).is_err());
        assert!(load("random:x:0.5", Some(3)).is_err());
        assert!(load("bent", Some(3)).is_err());
        assert!(load("nonsense", Some(3)).is_err());
        assert!(load("file:/nonexistent/table", None).is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["const0", "const1", "hyperplane:0110", "bent", "random:3:0.25", "anf:x1 + 1", "file:a/b"] {
            assert_eq!(s.parse::<FunctionSource>().unwrap().to_string(), s);
        }
    }
}
