//! Evidence tables: comma-separated, UTF-8, first row names the sources.
//! An optional column named exactly `y` carries the criterion and is passed
//! through rather than aggregated.

use crate::error::CliError;

#[derive(Debug)]
pub struct EvidenceFile {
    pub source_names: Vec<String>,
    /// One inner vector per data row, one entry per source column.
    pub rows: Vec<Vec<f64>>,
    /// Criterion values when the file has a `y` column.
    pub criterion: Option<Vec<f64>>,
}

pub fn parse(label: &str, text: &str) -> Result<EvidenceFile, CliError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line.trim_end_matches('\r')));

    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::Validation(format!("{label}: file is empty")))?;
    let names: Vec<String> = header.split(',').map(|c| c.trim().to_string()).collect();
    if names.iter().any(String::is_empty) {
        return Err(CliError::Validation(format!(
            "{label}: line 1: empty column name in header"
        )));
    }

    let y_columns: Vec<usize> = names
        .iter()
        .enumerate()
        .filter(|(_, n)| n.as_str() == "y")
        .map(|(i, _)| i)
        .collect();
    if y_columns.len() > 1 {
        return Err(CliError::Validation(format!(
            "{label}: line 1: more than one y column"
        )));
    }
    let y_column = y_columns.first().copied();

    let source_names: Vec<String> = names
        .iter()
        .enumerate()
        .filter(|(i, _)| Some(*i) != y_column)
        .map(|(_, n)| n.clone())
        .collect();
    if source_names.len() < 2 {
        return Err(CliError::Validation(format!(
            "{label}: need at least 2 source columns, found {}",
            source_names.len()
        )));
    }

    let mut rows = Vec::new();
    let mut criterion = Vec::new();
    for (line_no, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != names.len() {
            return Err(CliError::Validation(format!(
                "{label}: line {line_no}: expected {} cells, found {}",
                names.len(),
                cells.len()
            )));
        }
        let mut row = Vec::with_capacity(source_names.len());
        for (column, cell) in cells.iter().enumerate() {
            let value: f64 = cell.trim().parse().map_err(|_| {
                CliError::Validation(format!(
                    "{label}: line {line_no}: column {}: invalid number '{}'",
                    column + 1,
                    cell.trim()
                ))
            })?;
            if !value.is_finite() {
                return Err(CliError::Validation(format!(
                    "{label}: line {line_no}: column {}: non-finite value '{}'",
                    column + 1,
                    cell.trim()
                )));
            }
            if Some(column) == y_column {
                criterion.push(value);
            } else {
                row.push(value);
            }
        }
        rows.push(row);
    }

    if rows.is_empty() {
        return Err(CliError::Validation(format!("{label}: no data rows")));
    }

    Ok(EvidenceFile {
        source_names,
        rows,
        criterion: y_column.map(|_| criterion),
    })
}
