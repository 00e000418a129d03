//! Loss-file reader: one nonnegative loss per line, an optional `loss`
//! header, blank lines ignored.

use std::io::Read;
use std::path::Path;

use crate::CliError;

/// Parses loss data from text. `origin` names the source in error messages.
pub fn parse_losses(text: &str, origin: &str) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let first = !seen_content;
        seen_content = true;
        if first && line.eq_ignore_ascii_case("loss") {
            continue;
        }
        let parse_err = |message: String| CliError::Parse {
            origin: origin.to_string(),
            line: idx + 1,
            message,
        };
        let v: f64 = line
            .parse()
            .map_err(|_| parse_err(format!("`{line}` is not a number")))?;
        if !v.is_finite() {
            return Err(parse_err(format!("loss `{line}` is not finite")));
        }
        if v < 0.0 {
            return Err(parse_err(format!("loss {v} is negative")));
        }
        values.push(v);
    }
    if values.len() < 2 {
        return Err(CliError::Input(format!(
            "{origin}: need at least 2 losses, found {}",
            values.len()
        )));
    }
    Ok(values)
}

/// Reads a loss file; `-` reads standard input.
pub fn read_losses(path: &Path) -> Result<Vec<f64>, CliError> {
    let origin = path.display().to_string();
    let mut text = String::new();
    let res = if origin == "-" {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|source| CliError::Io {
        path: origin.clone(),
        source,
    })?;
    parse_losses(&text, &origin)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_blank_lines() {
        let v = parse_losses("loss\n1.5\n\n  2\n3e1\n", "t").unwrap();
        assert_eq!(v, vec![1.5, 2.0, 30.0]);
    }

    #[test]
    fn reports_line_of_bad_value() {
        match parse_losses("loss\n1\n\n-4\n", "f.csv") {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_losses("1\nabc\n", "f"),
            Err(CliError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_losses("1\ninf\n", "f"),
            Err(CliError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn header_only_allowed_first() {
        assert!(matches!(
            parse_losses("1\nloss\n2\n", "f"),
            Err(CliError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn too_few_rows() {
        assert!(matches!(
            parse_losses("loss\n7\n", "f"),
            Err(CliError::Input(_))
        ));
    }
}
