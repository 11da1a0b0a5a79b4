use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

use census_core::cayley::CayleyTable;
use census_core::gl::subgroups::SubgroupClassCount;
use census_core::gl::MatrixGroup;
use census_core::verify::VerificationReport;
use census_core::GroupCount;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Csv,
    Json,
}

const CSV_HEADER: &str = "n,shape,count,special_case";

fn json(out: &mut impl Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

pub fn count(
    out: &mut impl Write,
    g: &GroupCount,
    format: Format,
    explain: bool,
) -> io::Result<()> {
    match format {
        Format::Json => json(out, g),
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            csv_row(out, g)
        }
        Format::Plain => {
            let special = if g.special_case { ", special case" } else { "" };
            writeln!(
                out,
                "N({}) = {}  [{}{special}]",
                g.n,
                g.count,
                g.shape.tag()
            )?;
            if explain {
                for t in &g.terms {
                    writeln!(out, "  {} = {}", t.label, t.value)?;
                }
                writeln!(out, "  sum = {}", g.term_sum())?;
            }
            Ok(())
        }
    }
}

fn csv_row(out: &mut impl Write, g: &GroupCount) -> io::Result<()> {
    writeln!(
        out,
        "{},{},{},{}",
        g.n,
        g.shape.tag(),
        g.count,
        g.special_case
    )
}

pub fn rows(out: &mut impl Write, rows: &[GroupCount], format: Format) -> io::Result<()> {
    match format {
        Format::Json => json(out, &rows),
        Format::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            rows.iter().try_for_each(|g| csv_row(out, g))
        }
        Format::Plain => {
            let width = rows.last().map_or(1, |g| g.n.to_string().len());
            for g in rows {
                let mark = if g.special_case { "  *" } else { "" };
                writeln!(
                    out,
                    "{:>width$}  {:>6}  {}{mark}",
                    g.n,
                    g.count,
                    g.shape.tag()
                )?;
            }
            Ok(())
        }
    }
}

pub fn reports(
    out: &mut impl Write,
    reports: &[VerificationReport],
    format: Format,
    as_list: bool,
) -> io::Result<()> {
    match format {
        Format::Json if as_list => json(out, &reports),
        Format::Json => json(out, &reports[0]),
        Format::Csv => {
            writeln!(out, "suite,input,expected,actual,pass")?;
            for r in reports {
                for c in &r.cases {
                    writeln!(
                        out,
                        "{},\"{}\",{},{},{}",
                        r.suite, c.input, c.expected, c.actual, c.pass
                    )?;
                }
            }
            Ok(())
        }
        Format::Plain => reports.iter().try_for_each(|r| writeln!(out, "{r}")),
    }
}

/// Rows of a matrix, e.g. `[[1,0],[0,2]]`.
fn matrix(g: &MatrixGroup, i: u32) -> Vec<Vec<u8>> {
    let d = g.dim();
    g.matrix(i)[..d * d].chunks(d).map(|r| r.to_vec()).collect()
}

/// A small generating set of `h`, taken greedily in index order.
fn generators(g: &MatrixGroup, h: &[u32]) -> Vec<u32> {
    let mut gens: Vec<u32> = Vec::new();
    let mut span = vec![g.identity()];
    for &x in h {
        if span.binary_search(&x).is_err() {
            gens.push(x);
            span = g
                .closure(&gens, h.len())
                .expect("generators stay inside the subgroup");
        }
    }
    gens
}

#[derive(Serialize)]
struct GlOracleOutput {
    d: usize,
    p: u32,
    r: u64,
    classes: usize,
    subgroups: usize,
    /// Generators of one subgroup per class, as matrices.
    #[serde(skip_serializing_if = "Option::is_none")]
    witnesses: Option<Vec<Vec<Vec<Vec<u8>>>>>,
}

pub fn gl_oracle(
    out: &mut impl Write,
    g: &MatrixGroup,
    s: &SubgroupClassCount,
    format: Format,
    witnesses: bool,
) -> io::Result<()> {
    let gens: Option<Vec<Vec<u32>>> =
        witnesses.then(|| s.witnesses.iter().map(|h| generators(g, h)).collect());
    match format {
        Format::Json => json(
            out,
            &GlOracleOutput {
                d: s.d,
                p: s.p,
                r: s.r,
                classes: s.classes,
                subgroups: s.subgroups,
                witnesses: gens.map(|all| {
                    all.iter()
                        .map(|gs| gs.iter().map(|&x| matrix(g, x)).collect())
                        .collect()
                }),
            },
        ),
        Format::Csv => {
            writeln!(out, "d,p,r,classes,subgroups")?;
            writeln!(out, "{},{},{},{},{}", s.d, s.p, s.r, s.classes, s.subgroups)
        }
        Format::Plain => {
            writeln!(out, "{}", s.classes)?;
            for (i, gs) in gens.iter().flatten().enumerate() {
                let shown: Vec<String> =
                    gs.iter().map(|&x| format!("{:?}", matrix(g, x))).collect();
                writeln!(out, "  class {}: <{}>", i + 1, shown.join(", "))?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct CayleyOracleOutput<'a> {
    n: u32,
    count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    tables: Option<Vec<Vec<&'a [u8]>>>,
}

pub fn cayley_oracle(
    out: &mut impl Write,
    n: u32,
    tables: &[CayleyTable],
    format: Format,
    witnesses: bool,
) -> io::Result<()> {
    match format {
        Format::Json => json(
            out,
            &CayleyOracleOutput {
                n,
                count: tables.len(),
                tables: witnesses.then(|| tables.iter().map(|t| t.rows().collect()).collect()),
            },
        ),
        Format::Csv => {
            writeln!(out, "n,count")?;
            writeln!(out, "{n},{}", tables.len())
        }
        Format::Plain => {
            writeln!(out, "{}", tables.len())?;
            if witnesses {
                for (i, t) in tables.iter().enumerate() {
                    writeln!(out, "  group {}:", i + 1)?;
                    for row in t.rows() {
                        let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
                        writeln!(out, "    {}", cells.join(" "))?;
                    }
                }
            }
            Ok(())
        }
    }
}
