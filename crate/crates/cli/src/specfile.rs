//! TOML spec files.
//!
//! ```toml
//! two_j = 1
//! m_plus = "x/(2*m0) + mu"
//! m_minus = "delta"
//! neutral = false
//!
//! [params]
//! m0 = "1/2"
//! mu = 0
//! delta = 1
//!
//! [options]
//! tol = 1e-10
//! samples = 8
//! seed = 0
//! ```

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Deserialize;
use spinstat_core::{parse_expr, Error as CoreError, FieldSpec, Params, Rational};
use toml::Spanned;

use crate::error::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    two_j: Spanned<i64>,
    m_plus: Spanned<String>,
    m_minus: Spanned<String>,
    #[serde(default)]
    params: BTreeMap<String, Spanned<toml::Value>>,
    #[serde(default)]
    neutral: bool,
    #[serde(default)]
    options: FileOptions,
}

/// `[options]` table. Every field is optional; command-line flags win.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    pub tol: Option<f64>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub spec: FieldSpec,
    pub options: FileOptions,
    /// Expression text as written, for the report echo.
    pub m_plus_text: String,
    pub m_minus_text: String,
}

/// 1-based line and column of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let col = before.rfind('\n').map_or(offset, |nl| offset - nl - 1) + 1;
    (line, col)
}

fn parse_error(path: &str, text: &str, offset: usize, message: impl Into<String>) -> CliError {
    let (line, column) = line_col(text, offset);
    CliError::Parse {
        path: path.to_string(),
        line,
        column,
        message: message.into(),
    }
}

/// Offset inside the file of byte `pos` of a string value spanning `span`
/// (the span includes the opening quote).
fn inner_offset(span: &Range<usize>, pos: usize) -> usize {
    span.start + 1 + pos
}

/// Exact rational from a TOML integer, float, or expression string such as
/// `"1/2"`.
pub fn parse_rational(text: &str) -> Result<Rational, CoreError> {
    let f = parse_expr(text, &Params::new())?;
    f.as_constant().ok_or_else(|| CoreError::Syntax {
        pos: 0,
        message: format!("`{text}` is not a constant"),
    })
}

fn expr_error_pos(e: &CoreError) -> usize {
    match e {
        CoreError::Syntax { pos, .. }
        | CoreError::UnknownParameter { pos, .. }
        | CoreError::ZeroDivisor { pos } => *pos,
        _ => 0,
    }
}

fn expr_error_message(e: &CoreError) -> String {
    match e {
        CoreError::Syntax { message, .. } => message.clone(),
        CoreError::UnknownParameter { name, .. } => format!("unknown parameter `{name}`"),
        CoreError::ZeroDivisor { .. } => "division by the zero polynomial".into(),
        other => other.to_string(),
    }
}

/// Parses spec-file text. `overrides` replace `[params]` entries before the
/// expressions are parsed.
pub fn parse_spec(path: &str, text: &str, overrides: &Params) -> Result<LoadedSpec, CliError> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        parse_error(path, text, offset, e.message().trim().to_string())
    })?;

    let mut params = Params::new();
    for (name, value) in &raw.params {
        let span = value.span();
        let parsed = match value.get_ref() {
            toml::Value::Integer(i) => Ok(Rational::from_integer((*i).into())),
            toml::Value::Float(f) => parse_rational(&format!("{f}")),
            toml::Value::String(s) => parse_rational(s),
            other => {
                return Err(parse_error(
                    path,
                    text,
                    span.start,
                    format!(
                        "parameter `{name}` must be a number or rational string, found {}",
                        other.type_str()
                    ),
                ))
            }
        };
        let value = parsed.map_err(|e| {
            parse_error(
                path,
                text,
                span.start,
                format!("parameter `{name}`: {}", expr_error_message(&e)),
            )
        })?;
        params.insert(name.clone(), value);
    }
    for (k, v) in overrides {
        params.insert(k.clone(), v.clone());
    }

    let two_j = *raw.two_j.get_ref();
    if !(0..=64).contains(&two_j) {
        return Err(CliError::Validation(format!(
            "two_j = {two_j} must lie in 0..=64"
        )));
    }

    let expr = |field: &Spanned<String>| {
        parse_expr(field.get_ref(), &params).map_err(|e| {
            parse_error(
                path,
                text,
                inner_offset(&field.span(), expr_error_pos(&e)),
                expr_error_message(&e),
            )
        })
    };
    let m_plus = expr(&raw.m_plus)?;
    let m_minus = expr(&raw.m_minus)?;

    let mut spec = FieldSpec::new(two_j as u32, m_plus, m_minus).with_params(params);
    spec.neutral = raw.neutral;
    Ok(LoadedSpec {
        spec,
        options: raw.options,
        m_plus_text: raw.m_plus.into_inner(),
        m_minus_text: raw.m_minus.into_inner(),
    })
}

pub fn load_spec(path: &str, overrides: &Params) -> Result<LoadedSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    parse_spec(path, &text, overrides)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_full_file() {
        let text = r#"
two_j = 1
m_plus = "x/(2*m0) + mu"
m_minus = "delta"

[params]
m0 = "1/2"
mu = 0
delta = 1.5

[options]
samples = 4
"#;
        let loaded = parse_spec("bdg.toml", text, &Params::new()).unwrap();
        assert_eq!(loaded.spec.two_j, 1);
        assert_eq!(loaded.spec.m_plus.to_string(), "x");
        assert_eq!(loaded.spec.m_minus.to_string(), "3/2");
        assert_eq!(loaded.options.samples, Some(4));
    }

    #[test]
    fn expression_error_has_line_and_column() {
        let text = "two_j = 0\nm_plus = \"x + \"\nm_minus = \"0\"\n";
        match parse_spec("bad.toml", text, &Params::new()) {
            Err(CliError::Parse { line, column, .. }) => {
                assert_eq!(line, 2);
                // `m_plus = "x + ` is 14 characters; the missing operand is at 15
                assert_eq!(column, 15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_parameter_points_at_name() {
        let text = "two_j = 0\nm_plus = \"1\"\nm_minus = \"2*m0\"\n";
        match parse_spec("bad.toml", text, &Params::new()) {
            Err(CliError::Parse {
                line,
                column,
                message,
                ..
            }) => {
                assert_eq!((line, column), (3, 14));
                assert!(message.contains("m0"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn toml_syntax_error_is_positioned() {
        let text = "two_j = 0\nm_plus = = \"1\"\n";
        assert!(matches!(
            parse_spec("bad.toml", text, &Params::new()),
            Err(CliError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn overrides_replace_params() {
        let text = "two_j = 1\nm_plus = \"m0\"\nm_minus = \"2*y\"\n[params]\nm0 = 1\n";
        let mut o = Params::new();
        o.insert("m0".into(), parse_rational("4").unwrap());
        let loaded = parse_spec("d.toml", text, &o).unwrap();
        assert_eq!(loaded.spec.m_plus.to_string(), "4");
    }

    #[test]
    fn line_col_basics() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }
}
