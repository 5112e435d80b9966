//! Verification report rows shared by the library checks and the CLI.
//!
//! Reports serialize as TSV with columns: check-id, class, parameters,
//! status, first-defect-location, defect-value.  Assembly is deterministic;
//! values are exact rational or cyclotomic literals.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Pass => write!(f, "pass"),
            Status::Fail => write!(f, "fail"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckRow {
    pub check: String,
    pub class: String,
    pub params: String,
    pub status: Status,
    pub defect_loc: String,
    pub defect_val: String,
}

impl CheckRow {
    pub fn pass(check: &str, class: &str, params: String) -> Self {
        CheckRow {
            check: check.to_string(),
            class: class.to_string(),
            params,
            status: Status::Pass,
            defect_loc: "-".to_string(),
            defect_val: "-".to_string(),
        }
    }

    pub fn fail(check: &str, class: &str, params: String, loc: String, val: String) -> Self {
        CheckRow {
            check: check.to_string(),
            class: class.to_string(),
            params,
            status: Status::Fail,
            defect_loc: loc,
            defect_val: val,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub rows: Vec<CheckRow>,
}

impl Report {
    pub fn new() -> Self {
        Report { rows: Vec::new() }
    }

    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Report) {
        self.rows.extend(other.rows);
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Pass)
    }

    pub fn first_failure(&self) -> Option<&CheckRow> {
        self.rows.iter().find(|r| r.status == Status::Fail)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("check\tclass\tparams\tstatus\tdefect_location\tdefect_value\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                r.check, r.class, r.params, r.status, r.defect_loc, r.defect_val
            ));
        }
        out
    }
}
