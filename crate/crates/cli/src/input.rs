use std::fs;
use std::ops::RangeInclusive;
use std::path::Path;

use pbound::dist::ParameterVector;

use crate::error::CliError;

/// Parses `0.1,0.2,...`. An empty or all-blank string is the empty vector.
pub fn parse_probs(list: &str) -> Result<ParameterVector, CliError> {
    if list.trim().is_empty() {
        return Ok(ParameterVector::new(Vec::new())?);
    }
    let values = list
        .split(',')
        .enumerate()
        .map(|(i, s)| parse_probability(s.trim(), &format!("entry {}", i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ParameterVector::new(values)?)
}

/// Reads one probability per line, skipping blank lines and `#` comments.
pub fn read_probs_file(path: &Path) -> Result<ParameterVector, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let values = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i, line.trim()))
        .filter(|(_, line)| !line.is_empty() && !line.starts_with('#'))
        .map(|(i, line)| parse_probability(line, &format!("{} line {}", path.display(), i + 1)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ParameterVector::new(values)?)
}

fn parse_probability(s: &str, location: &str) -> Result<f64, CliError> {
    s.parse::<f64>()
        .map_err(|_| CliError::Input(format!("{location}: '{s}' is not a number")))
}

/// Parses `lo:hi` with `lo <= hi`.
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, CliError> {
    let bad = || CliError::Input(format!("range '{s}' must look like lo:hi with integers lo <= hi"));
    let (lo, hi) = s.split_once(':').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}
