//! Plain-text spectral ensembles: one `E_n p_n` pair per line, `#` comments.

use std::path::Path;

use critprobe_core::dissipative::SpectrumEnsemble;

use crate::CliError;

pub fn parse_ensemble(text: &str) -> Result<SpectrumEnsemble, CliError> {
    let mut levels = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let energy: f64 = parts
            .next()
            .ok_or_else(|| {
                CliError::Config(format!("ensemble line {}: missing energy", lineno + 1))
            })?
            .parse()
            .map_err(|_| CliError::Config(format!("ensemble line {}: bad energy", lineno + 1)))?;
        let weight: f64 = parts
            .next()
            .ok_or_else(|| {
                CliError::Config(format!("ensemble line {}: missing weight", lineno + 1))
            })?
            .parse()
            .map_err(|_| CliError::Config(format!("ensemble line {}: bad weight", lineno + 1)))?;
        if parts.next().is_some() {
            return Err(CliError::Config(format!(
                "ensemble line {}: expected exactly `energy weight`",
                lineno + 1
            )));
        }
        levels.push((energy, weight));
    }
    SpectrumEnsemble::from_weights(levels).map_err(|e| CliError::Config(e.to_string()))
}

pub fn load_ensemble(path: &Path) -> Result<SpectrumEnsemble, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read ensemble {}: {e}", path.display())))?;
    parse_ensemble(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_normalizes() {
        let ens =
            parse_ensemble("# ground and one excitation\n-3.5 2\n\n-1.25 2 # equal\n").unwrap();
        assert_eq!(ens.levels.len(), 2);
        assert!((ens.levels[0].1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_ensemble("1.0\n").is_err());
        assert!(parse_ensemble("1.0 0.5 9\n").is_err());
        assert!(parse_ensemble("one 0.5\n").is_err());
        assert!(parse_ensemble("").is_err());
    }
}
