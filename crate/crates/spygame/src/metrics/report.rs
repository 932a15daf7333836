//! Assembles per-group metric rows plus a pooled total, rendered as an
//! aligned text table or CSV. A dash marks every empty denominator.

use std::collections::BTreeMap;

use crate::game::{LocationCard, VoteSources};
use crate::gamelog::GameRecord;

use super::facts::{derive_facts, FactsError, FactsOptions, GameFacts};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupKey {
    SpyAgent,
    CitizenStrength,
    Location,
}

impl GroupKey {
    pub fn parse_list(spec: &str) -> Result<Vec<GroupKey>, String> {
        spec.split(',')
            .map(|part| match part.trim() {
                "spy" => Ok(GroupKey::SpyAgent),
                "citizen" => Ok(GroupKey::CitizenStrength),
                "location" => Ok(GroupKey::Location),
                other => Err(format!(
                    "unknown group key {other:?} (expected spy, citizen, or location)"
                )),
            })
            .collect()
    }

    fn value(self, facts: &GameFacts) -> String {
        match self {
            GroupKey::SpyAgent => facts.spy_agent.clone(),
            GroupKey::CitizenStrength => facts.citizen_strength.clone(),
            GroupKey::Location => facts.location.clone(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub grouping: Vec<GroupKey>,
    pub facts: FactsOptions,
    pub include_aborted: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            grouping: vec![GroupKey::SpyAgent, GroupKey::CitizenStrength],
            facts: FactsOptions::default(),
            include_aborted: false,
        }
    }
}

/// One row of the report; `None` renders as a dash.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsRow {
    pub group: String,
    pub games: usize,
    pub wr: Option<f64>,
    pub lr: Option<f64>,
    pub gs: (Option<f64>, usize),
    pub nr: Option<f64>,
    pub ic: (Option<f64>, usize),
    pub id: (Option<f64>, usize),
    pub cr: (Option<f64>, usize),
    pub vr: (Option<f64>, usize),
    pub ve: Option<f64>,
}

impl MetricsRow {
    fn from_facts(group: String, facts: &[GameFacts]) -> Self {
        MetricsRow {
            group,
            games: facts.len(),
            wr: super::win_rate(facts),
            lr: super::living_round(facts),
            gs: super::guess_success(facts),
            nr: super::notice_rate(facts),
            ic: super::information_catching(facts),
            id: super::information_deduction(facts),
            cr: super::caught_rate(facts),
            vr: super::vote_rate(facts),
            ve: super::vote_entropy(facts),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MetricReport {
    pub vote_sources: VoteSources,
    pub rows: Vec<MetricsRow>,
    pub total: MetricsRow,
    pub warnings: Vec<String>,
}

/// Derives facts for every record, groups them, and computes one metrics
/// row per group plus a pooled total. Groups with zero games are simply not
/// present; aborted games are excluded unless the options include them.
pub fn build_report(
    records: &[GameRecord],
    deck: &[LocationCard],
    options: &ReportOptions,
) -> Result<MetricReport, FactsError> {
    let mut warnings = Vec::new();
    let mut pool: Vec<GameFacts> = Vec::new();
    for record in records {
        let facts = derive_facts(record, deck, &options.facts)?;
        if facts.aborted && !options.include_aborted {
            warnings.push(format!("excluded aborted game {}", facts.game_id));
            continue;
        }
        pool.push(facts);
    }

    let mut groups: BTreeMap<String, Vec<GameFacts>> = BTreeMap::new();
    for facts in &pool {
        let key = options
            .grouping
            .iter()
            .map(|k| k.value(facts))
            .collect::<Vec<_>>()
            .join(" vs ");
        groups.entry(key).or_default().push(facts.clone());
    }

    let rows = groups
        .into_iter()
        .map(|(key, facts)| MetricsRow::from_facts(key, &facts))
        .collect();
    let vote_sources = options.facts.vote_sources.unwrap_or_else(|| {
        records
            .first()
            .map(|r| r.header.config.vote_sources)
            .unwrap_or_default()
    });

    Ok(MetricReport {
        vote_sources,
        rows,
        total: MetricsRow::from_facts("Total".into(), &pool),
        warnings,
    })
}

fn fmt_pct(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.2}"),
        None => "-".into(),
    }
}

fn fmt_pct_n(v: (Option<f64>, usize)) -> String {
    match v.0 {
        Some(value) => format!("{value:.2} ({})", v.1),
        None => format!("- ({})", v.1),
    }
}

fn fmt_ve(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.3}"),
        None => "-".into(),
    }
}

const HEADERS: [&str; 11] = [
    "group", "games", "WR%", "LR", "GS% (n)", "NR%", "IC% (n)", "ID% (n)", "CR% (n)", "VR% (n)",
    "VE",
];

impl MetricReport {
    fn row_cells(row: &MetricsRow) -> Vec<String> {
        vec![
            row.group.clone(),
            row.games.to_string(),
            fmt_pct(row.wr),
            fmt_pct(row.lr),
            fmt_pct_n(row.gs),
            fmt_pct(row.nr),
            fmt_pct_n(row.ic),
            fmt_pct_n(row.id),
            fmt_pct_n(row.cr),
            fmt_pct_n(row.vr),
            fmt_ve(row.ve),
        ]
    }

    /// Aligned plain-text table, one row per group plus the total.
    pub fn to_table(&self) -> String {
        let mut lines: Vec<Vec<String>> = vec![HEADERS.iter().map(|s| s.to_string()).collect()];
        for row in &self.rows {
            lines.push(Self::row_cells(row));
        }
        lines.push(Self::row_cells(&self.total));

        let widths: Vec<usize> = (0..HEADERS.len())
            .map(|i| lines.iter().map(|r| r[i].len()).max().unwrap_or(0))
            .collect();
        let mut out = format!("vote sources: {}\n", self.vote_sources);
        for (li, line) in lines.iter().enumerate() {
            let rendered: Vec<String> = line
                .iter()
                .enumerate()
                .map(|(i, cell)| {
                    if i == 0 {
                        format!("{cell:<width$}", width = widths[i])
                    } else {
                        format!("{cell:>width$}", width = widths[i])
                    }
                })
                .collect();
            out.push_str(&rendered.join("  "));
            out.push('\n');
            if li == 0 {
                let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
                out.push_str(&"-".repeat(total));
                out.push('\n');
            }
        }
        for warning in &self.warnings {
            out.push_str(&format!("note: {warning}\n"));
        }
        out
    }

    /// CSV with the same cells; the dash stays the canonical absent marker.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&HEADERS.join(","));
        out.push('\n');
        for row in self.rows.iter().chain(std::iter::once(&self.total)) {
            let cells = Self::row_cells(row)
                .into_iter()
                .map(|c| {
                    if c.contains(',') {
                        format!("\"{c}\"")
                    } else {
                        c
                    }
                })
                .collect::<Vec<_>>();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}
