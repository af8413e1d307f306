//! Twin-prime sweep: `gcd(S(2), 2^N - 1) = 1` and `phi2 = N - 1` for both
//! classes.

use serde::Serialize;

use crate::adic::two_adic_complexity;
use crate::cyclotomy::Partition;
use crate::error::Result;
use crate::ntcore::{twin_pairs, PeriodParams};
use crate::par::Execution;
use crate::sequences::{linear_complexity, BinarySequence, SequenceClass};

pub const CSV_HEADER: &str = "p,q,N,class,weight,gcd,phi2,lc";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub p: u64,
    pub q: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub class: u8,
    pub weight: usize,
    pub gcd: String,
    pub phi2: u64,
    pub lc: Option<usize>,
    /// gcd is 1 and `phi2 = N - 1`.
    pub ok: bool,
}

impl SweepRow {
    pub fn csv_line(&self) -> String {
        let lc = self.lc.map(|v| v.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.p, self.q, self.n, self.class, self.weight, self.gcd, self.phi2, lc
        )
    }
}

pub fn sweep_row(params: &PeriodParams, class: SequenceClass, with_lc: bool) -> Result<SweepRow> {
    let part = Partition::build(params)?;
    let seq = BinarySequence::generate(&part, class)?;
    let report = two_adic_complexity(&seq);
    Ok(SweepRow {
        p: params.p(),
        q: params.q(),
        n: params.n(),
        class: class.number().unwrap_or(0),
        weight: seq.weight(),
        gcd: report.gcd.to_string(),
        phi2: report.phi2,
        lc: with_lc.then(|| linear_complexity(&seq)),
        ok: report.gcd == 1u32.into() && report.is_maximal(),
    })
}

/// Rows for every twin pair `(p, p + 2)` with `p <= max_p`, sorted by
/// `(p, class)`.
pub fn twin_sweep(max_p: u64, with_lc: bool, exec: Execution) -> Result<Vec<SweepRow>> {
    let tasks: Vec<(u64, u64, SequenceClass)> = twin_pairs(max_p)
        .into_iter()
        .flat_map(|(p, q)| [(p, q, SequenceClass::Dh1), (p, q, SequenceClass::Dh2)])
        .collect();
    let mut rows = exec
        .map(&tasks, |&(p, q, class)| {
            let params = PeriodParams::new(p, q, None)?;
            sweep_row(&params, class, with_lc)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| (r.p, r.class));
    Ok(rows)
}

pub fn to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.csv_line());
        out.push('\n');
    }
    out
}
