use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::args::Shared;
use crate::Failure;

pub fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Loads a flat TOML run configuration. The shared keys `seed`, `out` and
/// `metrics` sit beside the subcommand keys, which are the long flag names
/// (`r-from = 2.5`).
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<(Shared, T), Failure> {
    let Some(path) = path else {
        return Ok((Shared::default(), T::default()));
    };
    let bad = |e: &dyn std::fmt::Display| Failure::Input(format!("{}: {e}", path.display()));
    let mut table: toml::Table = read(path)?.parse().map_err(|e| bad(&e))?;
    let mut shared = toml::Table::new();
    for key in ["seed", "out", "metrics"] {
        if let Some(v) = table.remove(key) {
            shared.insert(key.into(), v);
        }
    }
    let shared: Shared = toml::Value::Table(shared).try_into().map_err(|e| bad(&e))?;
    let specific: T = toml::Value::Table(table).try_into().map_err(|e| bad(&e))?;
    Ok((shared, specific))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::{GaRun, Layer, Problem};

    #[test]
    fn shared_keys_are_split_from_command_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ga.toml");
        fs::write(
            &path,
            "seed = 9\nout = \"best.csv\"\nproblem = \"coevolve\"\npop = 12\nmut = 0.1\n",
        )
        .unwrap();
        let (shared, ga): (Shared, GaRun) = load(Some(&path)).unwrap();
        assert_eq!(shared.seed, Some(9));
        assert_eq!(shared.out.as_deref(), Some(Path::new("best.csv")));
        assert_eq!(ga.problem, Some(Problem::Coevolve));
        assert_eq!((ga.pop, ga.mut_rate), (Some(12), Some(0.1)));

        let flags = GaRun {
            pop: Some(30),
            ..GaRun::default()
        };
        let merged = flags.or(ga);
        assert_eq!((merged.pop, merged.mut_rate), (Some(30), Some(0.1)));
    }

    #[test]
    fn no_config_means_all_defaults() {
        let (shared, ga): (Shared, GaRun) = load(None).unwrap();
        assert!(shared.seed.is_none() && ga.pop.is_none());
    }

    #[test]
    fn malformed_config_is_an_input_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.toml");
        fs::write(&path, "seed = \"seven\"").unwrap();
        assert!(matches!(load::<GaRun>(Some(&path)), Err(Failure::Input(_))));
        assert!(matches!(
            load::<GaRun>(Some(&dir.path().join("nope.toml"))),
            Err(Failure::Input(_))
        ));
    }
}
