//! Reading upstream CSV and reading/writing the canonical cache dialect.

use agroweather_core::{DailyRecord, Field, Quality};
use chrono::NaiveDate;

use crate::error::{DataSourceError, Result};

const DATE_COLUMNS: &[&str] = &["date", "yyyy-mm-dd"];
const MISSING_SENTINELS: &[&str] = &["", "na", "n/a", "nan", "null", "-", "-99.9", "-999", "-9999"];

/// Header names accepted for each field, canonical name first.
fn aliases(field: Field) -> &'static [&'static str] {
    match field {
        Field::TMax => &["t_max", "max_temp"],
        Field::TMin => &["t_min", "min_temp"],
        Field::Rain => &["rain", "daily_rain"],
        Field::Evaporation => &["evaporation", "evap_pan"],
        Field::Radiation => &["radiation"],
        Field::RhAtTmax => &["rh_at_tmax", "rh_tmax"],
        Field::RhAtTmin => &["rh_at_tmin", "rh_tmin"],
        Field::VapourPressure => &["vapour_pressure", "vp"],
        Field::Mslp => &["mslp"],
        Field::EtShortCrop => &["et_short_crop"],
        Field::EtTallCrop => &["et_tall_crop"],
    }
}

fn accepted_units(field: Field) -> &'static [&'static str] {
    match field.unit() {
        "°C" => &["°c", "oc", "c", "degc", "deg c"],
        "mm" => &["mm"],
        "MJ/m²" => &["mj/m²", "mj/m2", "mj/m^2"],
        "%" => &["%"],
        "hPa" => &["hpa"],
        _ => &[],
    }
}

enum Column {
    Date,
    Value(Field),
    Quality(Field),
    Ignored,
}

/// Splits `name (unit)` into its parts, lowercased.
fn split_header(raw: &str) -> (String, Option<String>) {
    let raw = raw.trim().trim_start_matches('\u{feff}');
    match raw.split_once('(') {
        Some((name, rest)) => (
            name.trim().to_ascii_lowercase(),
            Some(rest.trim_end_matches(')').trim().to_lowercase()),
        ),
        None => (raw.to_ascii_lowercase(), None),
    }
}

fn classify(raw: &str) -> Result<Column> {
    let (name, unit) = split_header(raw);
    if DATE_COLUMNS.contains(&name.as_str()) {
        return Ok(Column::Date);
    }
    for field in Field::ALL {
        let names = aliases(field);
        if names.contains(&name.as_str()) {
            if let Some(unit) = unit {
                if !accepted_units(field).contains(&unit.as_str()) {
                    return Err(DataSourceError::parse(1, raw, format!("unknown unit `{unit}` for {field}")));
                }
            }
            return Ok(Column::Value(field));
        }
        let is_quality = names.iter().any(|n| {
            name.strip_prefix(n)
                .is_some_and(|suffix| suffix == "_source" || suffix == "_quality")
        });
        if is_quality {
            return Ok(Column::Quality(field));
        }
    }
    Ok(Column::Ignored)
}

fn parse_date(text: &str) -> Option<NaiveDate> {
    let t = text.trim();
    NaiveDate::parse_from_str(t, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(t, "%Y%m%d"))
        .ok()
}

fn csv_error(e: csv::Error) -> DataSourceError {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    DataSourceError::parse(line, "", e.to_string())
}

/// Parses daily records from CSV text. Columns are matched by header name
/// (upstream or canonical spelling); unknown columns are ignored.
pub fn parse_daily_csv(text: &str) -> Result<Vec<DailyRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(csv_error)?.clone();
    let columns = headers.iter().map(classify).collect::<Result<Vec<_>>>()?;
    if !columns.iter().any(|c| matches!(c, Column::Date)) {
        return Err(DataSourceError::parse(1, "date", "no date column in header"));
    }

    let mut records: Vec<DailyRecord> = Vec::new();
    for row in reader.records() {
        let row = row.map_err(csv_error)?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let mut date = None;
        let mut values = [None; Field::COUNT];
        let mut codes: [Option<String>; Field::COUNT] = Default::default();
        for (i, column) in columns.iter().enumerate() {
            let cell = row.get(i).unwrap_or("");
            match column {
                Column::Date => {
                    date = Some(parse_date(cell).ok_or_else(|| {
                        DataSourceError::parse(line, &headers[i], format!("invalid date `{cell}`"))
                    })?);
                }
                Column::Value(field) => {
                    if MISSING_SENTINELS.contains(&cell.to_ascii_lowercase().as_str()) {
                        continue;
                    }
                    let v: f64 = cell.parse().map_err(|_| {
                        DataSourceError::parse(line, &headers[i], format!("invalid number `{cell}`"))
                    })?;
                    if !v.is_finite() {
                        return Err(DataSourceError::parse(line, &headers[i], "non-finite number"));
                    }
                    values[field.index()] = Some(v);
                }
                Column::Quality(field) => codes[field.index()] = Some(cell.to_string()),
                Column::Ignored => {}
            }
        }
        let date = date.ok_or_else(|| DataSourceError::parse(line, "date", "missing date"))?;
        if let Some(prev) = records.last() {
            if date <= prev.date {
                return Err(DataSourceError::parse(
                    line,
                    "date",
                    format!("date {date} does not follow {}", prev.date),
                ));
            }
        }
        let mut record = DailyRecord::empty(date);
        for field in Field::ALL {
            let quality = codes[field.index()]
                .take()
                .map(|c| Quality::parse(&c))
                .unwrap_or_else(|| Quality::Source(String::new()));
            record.set(field, values[field.index()], quality);
        }
        records.push(record);
    }
    Ok(records)
}

/// Header of the canonical dialect: values, then parallel quality columns.
pub fn canonical_header() -> Vec<String> {
    std::iter::once("date".to_string())
        .chain(Field::ALL.iter().map(|f| f.column().to_string()))
        .chain(Field::ALL.iter().map(|f| format!("{}_quality", f.column())))
        .collect()
}

/// Serializes records in the canonical dialect. Values use the shortest
/// representation that parses back to the same `f64`.
pub fn write_canonical_csv(records: &[DailyRecord]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(canonical_header()).expect("in-memory write");
    for r in records {
        let mut row = Vec::with_capacity(1 + 2 * Field::COUNT);
        row.push(r.date.format("%Y-%m-%d").to_string());
        row.extend(Field::ALL.iter().map(|f| r.get(*f).map(|v| v.to_string()).unwrap_or_default()));
        row.extend(Field::ALL.iter().map(|f| r.quality(*f).as_str().to_string()));
        writer.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 csv")
}
