//! CSV and SVG output, CSV input.
//!
//! * dataset files: header row, columns `x[,y[,z]],value`
//! * curve files: columns `method,x[,y[,z]],value`; the noise-free samples are
//!   labelled `reference` and the input samples `noisy`
//! * error tables: columns `method,param,E_c,E_d,ms`
//!
//! Reals are written in Rust's shortest round-trip decimal form, so parsing a
//! file reproduces the in-memory values exactly.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write;
use std::path::Path;

use super::{ExperimentReport, MethodOutcome};
use crate::error::{Error, Result};
use crate::geometry::Dataset;

const AXES: [&str; 3] = ["x", "y", "z"];

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    }
}

fn parse_field(path: &Path, line: u64, field: &str) -> Result<f64> {
    field.trim().parse::<f64>().map_err(|_| Error::Parse {
        path: path.to_path_buf(),
        message: format!("line {line}: `{field}` is not a number"),
    })
}

/// Reads a dataset with columns `x[,y[,z]],value`.
pub fn read_dataset_csv(path: &Path) -> Result<Dataset> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::Reader::from_reader(file);
    let headers = reader.headers().map_err(csv_err(path))?.clone();
    let dim = headers.len().saturating_sub(1);
    if !(1..=3).contains(&dim) || headers.get(dim).map(str::trim) != Some("value") {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            message: "expected header `x[,y[,z]],value`".into(),
        });
    }
    let mut positions = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err(path))?;
        let line = record.position().map_or(0, |p| p.line());
        for field in record.iter().take(dim) {
            positions.push(parse_field(path, line, field)?);
        }
        values.push(parse_field(path, line, &record[dim])?);
    }
    Dataset::new(dim, positions, values)
}

pub fn write_dataset_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut out = String::new();
    let header: Vec<&str> = AXES[..dataset.dim()].iter().copied().chain(["value"]).collect();
    writeln!(out, "{}", header.join(",")).unwrap();
    for i in 0..dataset.len() {
        for c in dataset.position(i) {
            write!(out, "{c},").unwrap();
        }
        writeln!(out, "{}", dataset.value(i)).unwrap();
    }
    std::fs::write(path, out).map_err(io_err(path))
}

/// One labelled curve read back from a curve file.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveRecord {
    pub method: String,
    pub positions: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

pub fn write_curves_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    let dim = report.noisy.dim();
    let mut out = String::new();
    let header: Vec<&str> = ["method"]
        .into_iter()
        .chain(AXES[..dim].iter().copied())
        .chain(["value"])
        .collect();
    writeln!(out, "{}", header.join(",")).unwrap();

    let mut emit = |label: &str, positions: &mut dyn Iterator<Item = &[f64]>, values: &[f64]| {
        for (p, v) in positions.zip(values) {
            write!(out, "{label}").unwrap();
            for c in p {
                write!(out, ",{c}").unwrap();
            }
            writeln!(out, ",{v}").unwrap();
        }
    };
    emit(
        "reference",
        &mut report.reference.positions(),
        report.reference.values(),
    );
    emit("noisy", &mut report.noisy.positions(), report.noisy.values());
    for o in &report.outcomes {
        if let Ok(r) = &o.result {
            let label = o.method.to_string();
            emit(&quote(&label), &mut report.queries.iter().map(Vec::as_slice), &r.values);
        }
    }
    std::fs::write(path, out).map_err(io_err(path))
}

// Method labels contain commas.
fn quote(s: &str) -> String {
    if s.contains(',') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn read_curves_csv(path: &Path) -> Result<Vec<CurveRecord>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut reader = csv::Reader::from_reader(file);
    let dim = reader.headers().map_err(csv_err(path))?.len().saturating_sub(2);
    if dim == 0 {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            message: "expected header `method,x[,y[,z]],value`".into(),
        });
    }
    let mut curves: Vec<CurveRecord> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_err(path))?;
        let line = record.position().map_or(0, |p| p.line());
        let label = &record[0];
        let pos = (1..=dim)
            .map(|j| parse_field(path, line, &record[j]))
            .collect::<Result<Vec<f64>>>()?;
        let value = parse_field(path, line, &record[dim + 1])?;
        match curves.last_mut() {
            Some(c) if c.method == label => {
                c.positions.push(pos);
                c.values.push(value);
            }
            _ => curves.push(CurveRecord {
                method: label.to_string(),
                positions: vec![pos],
                values: vec![value],
            }),
        }
    }
    Ok(curves)
}

fn table_row(o: &MethodOutcome) -> String {
    let ms = o.elapsed.as_secs_f64() * 1e3;
    match o.errors() {
        Some(e) => format!(
            "{},{},{},{},{ms}",
            quote(&o.method.to_string()),
            e.param,
            e.curvature.map_or(String::new(), |c| c.to_string()),
            e.distance
        ),
        None => format!("{},{},,,{ms}", quote(&o.method.to_string()), o.method.param()),
    }
}

/// Error/timing table, one row per method.
pub fn write_table_csv(report: &ExperimentReport, path: &Path) -> Result<()> {
    let mut out = String::from("method,param,E_c,E_d,ms\n");
    for o in &report.outcomes {
        writeln!(out, "{}", table_row(o)).unwrap();
    }
    std::fs::write(path, out).map_err(io_err(path))
}

/// Side-by-side comparison: one row per report (keyed by the first method's
/// parameter), an `E_c` column per method family, then an `E_d` column per
/// family.
pub fn write_comparison_table(reports: &[ExperimentReport], path: &Path) -> Result<()> {
    let families: Vec<String> = reports
        .first()
        .map(|r| r.outcomes.iter().map(|o| o.method.family()).collect())
        .unwrap_or_default();
    let mut out = String::from("param");
    for f in &families {
        write!(out, ",E_c {f}").unwrap();
    }
    for f in &families {
        write!(out, ",E_d {f}").unwrap();
    }
    out.push('\n');

    for report in reports {
        let param = report.outcomes.first().map_or(0, |o| o.method.param());
        let errs: Vec<_> = report.outcomes.iter().map(MethodOutcome::errors).collect();
        write!(out, "{param}").unwrap();
        for e in &errs {
            let c = e.and_then(|e| e.curvature).map_or(String::new(), |c| c.to_string());
            write!(out, ",{c}").unwrap();
        }
        for e in &errs {
            let d = e.map_or(String::new(), |e| e.distance.to_string());
            write!(out, ",{d}").unwrap();
        }
        out.push('\n');
    }
    std::fs::write(path, out).map_err(io_err(path))
}

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

/// Line chart of the reference curve, the noisy samples and every method's
/// curve. One-dimensional data only.
pub fn write_svg_plot(report: &ExperimentReport, path: &Path) -> Result<()> {
    if report.noisy.dim() != 1 {
        return Err(Error::Config("plots are only drawn for one-dimensional data".into()));
    }
    let (w, h, margin) = (960.0, 540.0, 50.0);
    let xs = report.noisy.raw_positions();
    let (x_lo, x_hi) = span(xs.iter().copied());
    let all_values = report
        .noisy
        .values()
        .iter()
        .chain(report.reference.values())
        .chain(
            report
                .outcomes
                .iter()
                .filter_map(|o| o.result.as_ref().ok())
                .flat_map(|r| r.values.iter()),
        )
        .copied();
    let (y_lo, y_hi) = span(all_values);
    let sx = |x: f64| margin + (x - x_lo) / (x_hi - x_lo).max(f64::MIN_POSITIVE) * (w - 2.0 * margin);
    let sy = |y: f64| h - margin - (y - y_lo) / (y_hi - y_lo).max(f64::MIN_POSITIVE) * (h - 2.0 * margin);

    let mut svg = String::new();
    writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    )
    .unwrap();
    writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        svg,
        r##"<rect x="{margin}" y="{margin}" width="{}" height="{}" fill="none" stroke="#999"/>"##,
        w - 2.0 * margin,
        h - 2.0 * margin
    )
    .unwrap();

    svg.push_str(r##"<g fill="#bbbbbb">"##);
    for (x, y) in xs.iter().zip(report.noisy.values()) {
        write!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="1.2"/>"#, sx(*x), sy(*y)).unwrap();
    }
    svg.push_str("</g>\n");

    let polyline = |svg: &mut String, pts: &mut dyn Iterator<Item = (f64, f64)>, color: &str, width: f64| {
        let mut sorted: Vec<(f64, f64)> = pts.collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let coords: Vec<String> = sorted
            .iter()
            .map(|(x, y)| format!("{:.2},{:.2}", sx(*x), sy(*y)))
            .collect();
        writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="{width}" points="{}"/>"#,
            coords.join(" ")
        )
        .unwrap();
    };

    let mut legend = vec![("reference".to_string(), "#000000")];
    polyline(
        &mut svg,
        &mut report
            .reference
            .raw_positions()
            .iter()
            .copied()
            .zip(report.reference.values().iter().copied()),
        "#000000",
        1.5,
    );
    let mut color = PALETTE.iter().cycle();
    for o in &report.outcomes {
        if let Ok(r) = &o.result {
            let c = color.next().expect("cycle");
            polyline(
                &mut svg,
                &mut report.queries.iter().map(|q| q[0]).zip(r.values.iter().copied()),
                c,
                1.2,
            );
            legend.push((o.method.to_string(), c));
        }
    }
    for (i, (label, c)) in legend.iter().enumerate() {
        let y = margin + 16.0 + 16.0 * i as f64;
        writeln!(
            svg,
            r#"<line x1="{x1}" y1="{y}" x2="{x2}" y2="{y}" stroke="{c}" stroke-width="2"/><text x="{tx}" y="{ty}" font-family="sans-serif" font-size="12">{label}</text>"#,
            x1 = margin + 10.0,
            x2 = margin + 30.0,
            tx = margin + 36.0,
            ty = y + 4.0,
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");

    let mut file = File::create(path).map_err(io_err(path))?;
    file.write_all(svg.as_bytes()).map_err(io_err(path))
}

fn span(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_experiment, ExperimentConfig, MethodSpec};
    use crate::rbf::RbfTail;

    fn report(methods: Vec<MethodSpec>) -> ExperimentReport {
        run_experiment(&ExperimentConfig::standard(300, 5, methods)).unwrap()
    }

    #[test]
    fn curves_round_trip_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("curves.csv");
        let r = report(vec![
            MethodSpec::Lowess { degree: 1, k: 30 },
            MethodSpec::RbfLocal {
                tail: RbfTail::Constant,
                k: 30,
            },
        ]);
        write_curves_csv(&r, &path).unwrap();
        let curves = read_curves_csv(&path).unwrap();
        let labels: Vec<&str> = curves.iter().map(|c| c.method.as_str()).collect();
        assert_eq!(
            labels,
            ["reference", "noisy", "lowess:d=1,k=30", "rbf-local:poly=const,k=30"]
        );
        assert_eq!(curves[1].values, r.noisy.values());
        assert_eq!(curves[2].values, r.outcomes[0].result.as_ref().unwrap().values);
        assert_eq!(curves[3].positions, r.queries);
    }

    #[test]
    fn dataset_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("data.csv");
        let ds = Dataset::new(2, vec![0.1, 0.2, 1.0 / 3.0, -4.5e-9], vec![7.0, f64::MIN_POSITIVE]).unwrap();
        write_dataset_csv(&ds, &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap().lines().next(),
            Some("x,y,value")
        );
        assert_eq!(read_dataset_csv(&path).unwrap(), ds);
    }

    #[test]
    fn bad_dataset_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "x,y\n1,2\n").unwrap();
        assert!(matches!(read_dataset_csv(&path), Err(Error::Parse { .. })));
        std::fs::write(&path, "x,value\n1,abc\n").unwrap();
        assert!(matches!(read_dataset_csv(&path), Err(Error::Parse { .. })));
        let missing = dir.path().join("missing.csv");
        match read_dataset_csv(&missing) {
            Err(Error::Io { path, .. }) => assert_eq!(path, missing),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_method_list_gives_header_only_tables() {
        let dir = tempfile::tempdir().unwrap();
        let r = report(vec![]);
        let table = dir.path().join("t.csv");
        write_table_csv(&r, &table).unwrap();
        assert_eq!(std::fs::read_to_string(&table).unwrap(), "method,param,E_c,E_d,ms\n");
        let cmp = dir.path().join("c.csv");
        write_comparison_table(&[], &cmp).unwrap();
        assert_eq!(std::fs::read_to_string(&cmp).unwrap(), "param\n");
    }

    #[test]
    fn comparison_table_shape() {
        let dir = tempfile::tempdir().unwrap();
        let reports: Vec<_> = [20, 40, 60, 80]
            .iter()
            .map(|&k| {
                report(vec![
                    MethodSpec::Lowess { degree: 1, k },
                    MethodSpec::RbfLocal {
                        tail: RbfTail::Constant,
                        k,
                    },
                ])
            })
            .collect();
        let path = dir.path().join("tab.csv");
        write_comparison_table(&reports, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(
            lines[0],
            "param,E_c lowess(d=1),E_c rbf-local(const),E_d lowess(d=1),E_d rbf-local(const)"
        );
        assert_eq!(lines.len(), 5);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 5));
        assert!(lines[4].starts_with("80,"));
    }

    #[test]
    fn failed_method_leaves_empty_cells() {
        let dir = tempfile::tempdir().unwrap();
        let r = report(vec![MethodSpec::Lowess { degree: 3, k: 2 }]);
        let path = dir.path().join("t.csv");
        write_table_csv(&r, &path).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("\"lowess:d=3,k=2\",2,,,"));
    }

    #[test]
    fn svg_plot() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.svg");
        write_svg_plot(&report(vec![MethodSpec::Lowess { degree: 1, k: 30 }]), &path).unwrap();
        let svg = std::fs::read_to_string(&path).unwrap();
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert_eq!(svg.matches("<circle").count(), 300);
    }
}
