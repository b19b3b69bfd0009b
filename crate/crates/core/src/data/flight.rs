use std::path::Path;

use super::dataset::{linspace_pi, Dataset};
use crate::error::{Error, Result};

const BUNDLED: &str = include_str!("../../data/airline-passengers.csv");
const EXPECTED_ROWS: usize = 144;

/// Monthly airline passenger counts mapped onto `[-pi, pi]`.
#[derive(Clone, Debug)]
pub struct FlightData {
    pub dataset: Dataset,
    pub months: Vec<String>,
    pub passengers: Vec<u32>,
    /// Non-fatal issues found while loading (e.g. unexpected row count).
    pub warnings: Vec<String>,
}

/// The 1949-1960 series shipped with this crate.
pub fn flight_passengers_bundled() -> Result<FlightData> {
    parse_flight_csv(BUNDLED)
}

pub fn load_flight_passengers(path: &Path) -> Result<FlightData> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_flight_csv(&text)
}

/// Parse `Month,Passengers` CSV (`YYYY-MM`, integer count), keeping file order.
pub fn parse_flight_csv(text: &str) -> Result<FlightData> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    if names != ["Month", "Passengers"] {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header Month,Passengers, found {}",
                names.join(",")
            ),
        });
    }

    let mut months = Vec::new();
    let mut passengers = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 columns, found {}", record.len()),
            });
        }
        let month = record[0].trim();
        if !is_year_month(month) {
            return Err(Error::Parse {
                line,
                message: format!("month {month:?} is not YYYY-MM"),
            });
        }
        let count: u32 = record[1].trim().parse().map_err(|_| Error::Parse {
            line,
            message: format!("passenger count {:?} is not an integer", &record[1]),
        })?;
        months.push(month.to_string());
        passengers.push(count);
    }

    let mut warnings = Vec::new();
    if passengers.len() != EXPECTED_ROWS {
        warnings.push(format!(
            "expected {EXPECTED_ROWS} monthly rows, found {}",
            passengers.len()
        ));
    }
    let raw: Vec<f64> = passengers.iter().map(|&p| f64::from(p)).collect();
    let dataset = Dataset::from_raw(linspace_pi(raw.len()), &raw)?;
    Ok(FlightData {
        dataset,
        months,
        passengers,
        warnings,
    })
}

fn is_year_month(s: &str) -> bool {
    let b = s.as_bytes();
    b.len() == 7
        && b[4] == b'-'
        && b[..4].iter().chain(&b[5..]).all(u8::is_ascii_digit)
        && matches!(s[5..].parse::<u32>(), Ok(1..=12))
}
