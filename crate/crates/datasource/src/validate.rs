use agroweather_core::{DailyRecord, Field};
use chrono::NaiveDate;
use std::fmt;

/// A record value that broke a physical invariant and was dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub date: NaiveDate,
    pub fields: Vec<Field>,
    pub reason: &'static str,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<_> = self.fields.iter().map(|f| f.column()).collect();
        write!(f, "{}: {} ({})", self.date, names.join(", "), self.reason)
    }
}

/// Checks every record invariant, demoting offending values to missing.
pub fn validate_records(mut records: Vec<DailyRecord>) -> (Vec<DailyRecord>, Vec<Violation>) {
    let mut violations = Vec::new();
    for r in &mut records {
        if let (Some(hi), Some(lo)) = (r.t_max(), r.t_min()) {
            if hi < lo {
                r.demote(Field::TMax);
                r.demote(Field::TMin);
                violations.push(Violation {
                    date: r.date,
                    fields: vec![Field::TMax, Field::TMin],
                    reason: "t_max below t_min",
                });
            }
        }
        for field in [Field::RhAtTmax, Field::RhAtTmin] {
            if r.get(field).is_some_and(|v| !(0.0..=100.0).contains(&v)) {
                r.demote(field);
                violations.push(Violation {
                    date: r.date,
                    fields: vec![field],
                    reason: "relative humidity outside 0..=100",
                });
            }
        }
        for field in [Field::Rain, Field::Evaporation, Field::Radiation] {
            if r.get(field).is_some_and(|v| v < 0.0) {
                r.demote(field);
                violations.push(Violation {
                    date: r.date,
                    fields: vec![field],
                    reason: "negative amount",
                });
            }
        }
    }
    (records, violations)
}
