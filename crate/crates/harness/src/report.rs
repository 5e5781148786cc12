use std::str::FromStr;

use mccsim_core::channel::ScatteringKind;
use mccsim_core::geometry::Scenario;

use crate::capacity::{CapacityRow, CapacityTable};
use crate::error::{Error, Result};
use crate::experiment::{BoundRow, ResultRow, ResultTable, TableMetadata};

/// Output encodings of the result tables.
///
/// CSV files carry the table metadata as a single JSON object on a leading
/// `#` comment line, so one file is a self-contained, reproducible record
/// (and gnuplot-friendly). JSON files are the serde encoding of the whole
/// table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

const RESULT_HEADER: &str =
    "ell,scenario,scattering,trials,outage_count,p_hat,ci_low,ci_high,ope_hat,bound_lower,bound_upper";
const CAPACITY_HEADER: &str = "ell,scenario,scattering,epsilon,theta_star,capacity_nats";
const BOUND_HEADER: &str = "ell,scenario,scattering,phi_lower,phi_upper,regime";

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn metadata_line(metadata: &TableMetadata) -> Result<String> {
    let json = serde_json::to_string(metadata)
        .map_err(|e| Error::Parse(format!("metadata encode: {e}")))?;
    Ok(format!("# {json}"))
}

pub fn result_table_to_csv(table: &ResultTable) -> Result<String> {
    let mut out = metadata_line(&table.metadata)?;
    out.push('\n');
    out.push_str(RESULT_HEADER);
    out.push('\n');
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.ell,
            r.scenario,
            r.scattering,
            r.trials,
            r.outage_count,
            r.p_hat,
            r.ci_low,
            r.ci_high,
            opt(r.ope_hat),
            opt(r.bound_lower),
            opt(r.bound_upper),
        ));
    }
    Ok(out)
}

pub fn capacity_table_to_csv(table: &CapacityTable) -> Result<String> {
    let mut out = metadata_line(&table.metadata)?;
    out.push('\n');
    out.push_str(CAPACITY_HEADER);
    out.push('\n');
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.ell, r.scenario, r.scattering, r.epsilon, r.theta_star, r.capacity_nats,
        ));
    }
    Ok(out)
}

pub fn bound_rows_to_csv(metadata: &TableMetadata, rows: &[BoundRow]) -> Result<String> {
    let mut out = metadata_line(metadata)?;
    out.push('\n');
    out.push_str(BOUND_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.ell, r.scenario, r.scattering, r.phi_lower, r.phi_upper, r.regime,
        ));
    }
    Ok(out)
}

struct CsvBody<'a> {
    metadata: TableMetadata,
    records: Vec<Vec<&'a str>>,
}

/// Splits a CSV document into its metadata header and field records,
/// checking the column header verbatim.
fn parse_csv_body<'a>(text: &'a str, header: &str) -> Result<CsvBody<'a>> {
    let mut lines = text.lines();
    let meta_line = lines
        .next()
        .ok_or_else(|| Error::Parse("empty document".into()))?;
    let json = meta_line
        .strip_prefix("# ")
        .ok_or_else(|| Error::Parse("first line must be a '# ' metadata comment".into()))?;
    let metadata: TableMetadata =
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("metadata decode: {e}")))?;
    let head = lines
        .next()
        .ok_or_else(|| Error::Parse("missing column header".into()))?;
    if head != header {
        return Err(Error::Parse(format!(
            "unexpected column header '{head}' (want '{header}')"
        )));
    }
    let expected = header.split(',').count();
    let mut records = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != expected {
            return Err(Error::Parse(format!(
                "row {} has {} fields, want {expected}",
                i + 1,
                fields.len()
            )));
        }
        records.push(fields);
    }
    Ok(CsvBody { metadata, records })
}

fn field<T: FromStr>(s: &str, name: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    s.parse()
        .map_err(|e| Error::Parse(format!("bad {name} '{s}': {e}")))
}

fn opt_field(s: &str, name: &str) -> Result<Option<f64>> {
    if s.is_empty() {
        Ok(None)
    } else {
        field(s, name).map(Some)
    }
}

pub fn result_table_from_csv(text: &str) -> Result<ResultTable> {
    let body = parse_csv_body(text, RESULT_HEADER)?;
    let mut rows = Vec::with_capacity(body.records.len());
    for f in body.records {
        rows.push(ResultRow {
            ell: field(f[0], "ell")?,
            scenario: field::<Scenario>(f[1], "scenario")?,
            scattering: field::<ScatteringKind>(f[2], "scattering")?,
            trials: field(f[3], "trials")?,
            outage_count: field(f[4], "outage_count")?,
            p_hat: field(f[5], "p_hat")?,
            ci_low: field(f[6], "ci_low")?,
            ci_high: field(f[7], "ci_high")?,
            ope_hat: opt_field(f[8], "ope_hat")?,
            bound_lower: opt_field(f[9], "bound_lower")?,
            bound_upper: opt_field(f[10], "bound_upper")?,
        });
    }
    Ok(ResultTable {
        metadata: body.metadata,
        rows,
    })
}

pub fn capacity_table_from_csv(text: &str) -> Result<CapacityTable> {
    let body = parse_csv_body(text, CAPACITY_HEADER)?;
    let mut rows = Vec::with_capacity(body.records.len());
    for f in body.records {
        rows.push(CapacityRow {
            ell: field(f[0], "ell")?,
            scenario: field::<Scenario>(f[1], "scenario")?,
            scattering: field::<ScatteringKind>(f[2], "scattering")?,
            epsilon: field(f[3], "epsilon")?,
            theta_star: field(f[4], "theta_star")?,
            capacity_nats: field(f[5], "capacity_nats")?,
        });
    }
    Ok(CapacityTable {
        metadata: body.metadata,
        rows,
    })
}

pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("json encode: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("json decode: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ExperimentSpec;
    use crate::experiment::run_fig3;

    fn tiny_table() -> ResultTable {
        let spec = ExperimentSpec {
            trials: 300,
            seed: 3,
            sweep: vec![1.0, 2.0],
            ..ExperimentSpec::default()
        };
        run_fig3(&spec).unwrap()
    }

    #[test]
    fn result_csv_round_trip_is_identity() {
        let table = tiny_table();
        let text = result_table_to_csv(&table).unwrap();
        let back = result_table_from_csv(&text).unwrap();
        assert_eq!(table, back);
    }

    #[test]
    fn result_json_round_trip_is_identity() {
        let table = tiny_table();
        let text = to_json(&table).unwrap();
        let back: ResultTable = from_json(&text).unwrap();
        assert_eq!(table, back);
    }

    #[test]
    fn capacity_csv_round_trip_is_identity() {
        let spec = ExperimentSpec {
            trials: 300,
            seed: 3,
            sweep: vec![1.0, 2.0],
            ..ExperimentSpec::default()
        };
        let table = crate::capacity::run_fig4(&spec).unwrap();
        let text = capacity_table_to_csv(&table).unwrap();
        let back = capacity_table_from_csv(&text).unwrap();
        assert_eq!(table, back);
    }

    #[test]
    fn wrong_header_is_rejected() {
        let table = tiny_table();
        let text = result_table_to_csv(&table).unwrap();
        let err = capacity_table_from_csv(&text).unwrap_err();
        assert!(matches!(err, Error::Parse(_)), "{err:?}");
    }

    #[test]
    fn metadata_reproduces_a_row_bit_exactly() {
        let table = tiny_table();
        let text = result_table_to_csv(&table).unwrap();
        let back = result_table_from_csv(&text).unwrap();
        // Re-run one row from nothing but the parsed metadata.
        let row = &back.rows[3];
        let cfg = back
            .metadata
            .spec
            .sim_config(row.ell, row.scenario, row.scattering)
            .unwrap();
        let est = mccsim_core::simcore::estimate_outage(&cfg).unwrap();
        assert_eq!(est.outage_count, row.outage_count);
        assert_eq!(est.p_hat.to_bits(), row.p_hat.to_bits());
        assert_eq!(est.ci.0.to_bits(), row.ci_low.to_bits());
        assert_eq!(est.ci.1.to_bits(), row.ci_high.to_bits());
    }
}
