use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use hcon::coding::CodingError;
use hcon::evaluation::EvaluationError;
use hcon::formulas::{parse_formula, parse_lines, parse_term, Formula, ParseError, Term};
use hcon::search::SearchError;
use hcon::skolem::{preset, SkolemError, TermSet, Theory};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: {source}")]
    Parse {
        origin: String,
        #[source]
        source: ParseError,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Skolem(#[from] SkolemError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Evaluation(#[from] EvaluationError),
    #[error(transparent)]
    Coding(#[from] CodingError),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn formula(text: &str, origin: &str) -> Result<Formula, CliError> {
    parse_formula(text).map_err(|source| CliError::Parse { origin: origin.to_string(), source })
}

/// Where the axioms come from. Exactly one field is set; clap enforces it.
#[derive(Debug, Clone, Default)]
pub struct TheorySource {
    pub preset: Option<String>,
    pub theory: Option<PathBuf>,
    pub formula: Vec<String>,
}

impl TheorySource {
    pub fn load(&self) -> Result<Theory, CliError> {
        if let Some(name) = &self.preset {
            return Ok(preset(name)?);
        }
        if let Some(path) = &self.theory {
            let text = read(path)?;
            let origin = path.display().to_string();
            let axioms = parse_lines(&text, parse_formula)
                .map_err(|(line, source)| CliError::Parse { origin: format!("{origin}:{line}"), source })?;
            let name = path.file_stem().map_or("theory".into(), |s| s.to_string_lossy().into_owned());
            return Ok(Theory::from_axioms(&name, axioms)?);
        }
        if self.formula.is_empty() {
            return Err(CliError::Usage("no theory given".into()));
        }
        let axioms = self.formula.iter().map(|f| formula(f, "--formula")).collect::<Result<Vec<_>, _>>()?;
        Ok(Theory::from_axioms("formula", axioms)?)
    }
}

/// Parse a term and turn its variables into parameters of the theory.
pub fn ground_term(theory: &mut Theory, text: &str, origin: &str) -> Result<Term, CliError> {
    let t = parse_term(text).map_err(|source| CliError::Parse { origin: origin.to_string(), source })?;
    Ok(theory.registry_mut().ground_term(&t)?)
}

/// Split a comma-separated list at parenthesis depth zero.
pub fn split_list(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(text[start..].trim());
    out.retain(|s| !s.is_empty());
    out
}

pub fn term_list(theory: &mut Theory, text: &str, origin: &str) -> Result<TermSet, CliError> {
    let terms = split_list(text).into_iter().map(|s| ground_term(theory, s, origin)).collect::<Result<Vec<_>, _>>()?;
    Ok(TermSet::new(terms)?)
}

/// A `.lam` file: one term per line, `#` comments.
pub fn term_file(theory: &mut Theory, path: &Path) -> Result<TermSet, CliError> {
    let text = read(path)?;
    let origin = path.display().to_string();
    let raw = parse_lines(&text, parse_term)
        .map_err(|(line, source)| CliError::Parse { origin: format!("{origin}:{line}"), source })?;
    let terms = raw.iter().map(|t| theory.registry_mut().ground_term(t)).collect::<Result<Vec<_>, _>>()?;
    Ok(TermSet::new(terms)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists_split_at_top_level() {
        assert_eq!(split_list("0, $1(t, 0), S(0)"), ["0", "$1(t, 0)", "S(0)"]);
        assert_eq!(split_list(" 0 "), ["0"]);
        assert!(split_list("").is_empty());
    }

    #[test]
    fn free_names_become_parameters() {
        let mut th = preset("EX2").unwrap();
        let ts = term_list(&mut th, "t, t*t, $1(t)", "test").unwrap();
        assert_eq!(ts.len(), 3);
        assert!(th.registry().find_parameter("t").is_some());
        assert!(matches!(term_list(&mut th, "$7(0)", "test"), Err(CliError::Skolem(_))));
    }
}
