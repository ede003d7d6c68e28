//! Rendering of reports in the three output formats.

use std::io::{self, Write};

use serde::Serialize;
use somass_core::verify::CheckReport;
use somass_core::{ClassificationResult, GroupKind, MassReport, MatrixText};

use crate::config::OutputFormat;

fn json<T: Serialize + ?Sized>(v: &T, out: &mut dyn Write) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, v)?;
    writeln!(out)
}

fn opt(x: Option<usize>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

pub fn mass(fmt: OutputFormat, r: &MassReport, out: &mut dyn Write) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => json(r, out),
        OutputFormat::Tsv => {
            writeln!(out, "family\tp\tn\tk1\tk2\tvalue")?;
            for t in &r.breakdown {
                writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", r.family, r.p, r.n, t.k1, t.k2, t.term)?;
            }
            writeln!(out, "{}\t{}\t{}\t{}\t{}\t{}", r.family, r.p, r.n, opt(r.k1), opt(r.k2), r.value)
        }
        OutputFormat::Text => {
            writeln!(out, "{}", r.value)?;
            if r.breakdown.len() > 1 {
                for t in &r.breakdown {
                    writeln!(out, "  k1={} k2={}: {}", t.k1, t.k2, t.term)?;
                }
            }
            if let Some(d) = &r.diagnostic {
                writeln!(out, "  note: {d}")?;
            }
            Ok(())
        }
    }
}

pub fn classification(fmt: OutputFormat, r: &ClassificationResult, out: &mut dyn Write) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => json(r, out),
        OutputFormat::Tsv => {
            writeln!(out, "class\taut_order\tclass_size\tmatrix")?;
            for (i, c) in r.classes.iter().enumerate() {
                let rows: Vec<String> = c
                    .representative
                    .gens()
                    .row_vecs()
                    .iter()
                    .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
                    .collect();
                writeln!(out, "{i}\t{}\t{}\t{}", c.aut_order, c.class_size, rows.join(";"))?;
            }
            writeln!(out, "# mass_sum {} expected {} certified {}", r.mass_sum, r.expected_mass, r.certified)
        }
        OutputFormat::Text => {
            writeln!(
                out,
                "{} class{} of {} codes, p = {}, n = {}, group: {}",
                r.classes.len(),
                if r.classes.len() == 1 { "" } else { "es" },
                r.family,
                r.p,
                r.n,
                match r.group {
                    GroupKind::SignedMonomial => "signed permutations",
                    GroupKind::Permutation => "permutations",
                }
            )?;
            for (i, c) in r.classes.iter().enumerate() {
                writeln!(out, "\n# class {i}: |Aut| = {}, {} codes", c.aut_order, c.class_size)?;
                write!(out, "{}", MatrixText::from_matrix(c.representative.gens()))?;
            }
            writeln!(
                out,
                "\nmass sum {} expected {}: {}",
                r.mass_sum,
                r.expected_mass,
                if r.certified { "certified" } else { "NOT certified" }
            )?;
            if let Some(d) = &r.diagnostic {
                writeln!(out, "note: {d}")?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CheckWire<'a> {
    criterion: u8,
    name: &'a str,
    passed: bool,
    checks: u64,
    failures: u64,
    details: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    note: &'a Option<String>,
}

pub fn checks(fmt: OutputFormat, checks: &[CheckReport], out: &mut dyn Write) -> io::Result<()> {
    match fmt {
        OutputFormat::Json => {
            let wire: Vec<CheckWire> = checks
                .iter()
                .map(|c| CheckWire {
                    criterion: c.id,
                    name: c.name,
                    passed: c.passed(),
                    checks: c.checked,
                    failures: c.failure_count,
                    details: &c.failures,
                    note: &c.note,
                })
                .collect();
            json(&wire, out)
        }
        OutputFormat::Tsv => {
            writeln!(out, "criterion\tname\tpassed\tchecks\tfailures")?;
            for c in checks {
                writeln!(out, "{}\t{}\t{}\t{}\t{}", c.id, c.name, c.passed(), c.checked, c.failure_count)?;
            }
            Ok(())
        }
        OutputFormat::Text => {
            for c in checks {
                writeln!(out, "{}", c.untimed())?;
            }
            Ok(())
        }
    }
}
