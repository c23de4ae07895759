//! CSV data for plotting pseudo-revenues and virtual values.

use std::fs;
use std::path::{Path, PathBuf};

use upl_core::analysis::{initial_virtual_values, route_cutoffs, RevenueCurves, Route};
use upl_core::duality::virtual_values;
use upl_core::ironing::iron_instance;
use upl_core::rational::{format_rational, to_decimal};
use upl_core::{Instance, Rational};

use crate::commands::CliError;

const DIGITS: usize = 12;

fn exact_and_decimal(value: &Rational) -> [String; 2] {
    [format_rational(value), to_decimal(value, DIGITS)]
}

fn to_csv(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("writing to memory");
    for row in rows {
        w.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("CSV text is UTF-8")
}

fn virtual_value_rows(phi: &[Vec<Rational>]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, row) in phi.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            let [exact, approx] = exact_and_decimal(v);
            rows.push(vec![
                (i + 1).to_string(),
                (k + 1).to_string(),
                exact,
                approx,
            ]);
        }
    }
    rows
}

/// File names and contents. Ironed virtual values are included when the
/// instance is not regular but the mostly-regular route applies and the
/// ironing succeeds.
pub fn plot_files(inst: &Instance) -> Vec<(String, String)> {
    let curves = RevenueCurves::new(inst);
    let mut files = Vec::new();
    for k in 0..inst.d() {
        let rows = curves.revenue[k]
            .iter()
            .zip(&curves.closure[k])
            .enumerate()
            .map(|(i, (r, rbar))| {
                let [r, r_f] = exact_and_decimal(r);
                let [rbar, rbar_f] = exact_and_decimal(rbar);
                vec![(i + 1).to_string(), r, rbar, r_f, rbar_f]
            })
            .collect();
        files.push((
            format!("pseudo_revenue_item{}.csv", k + 1),
            to_csv(&["i", "R", "Rbar", "R_f", "Rbar_f"], rows),
        ));
    }
    let header = ["i", "k", "phi", "phi_f"];
    files.push((
        "virtual_values.csv".to_string(),
        to_csv(&header, virtual_value_rows(&initial_virtual_values(inst))),
    ));
    if route_cutoffs(inst, Route::Regular).is_none() {
        if let Some(cutoffs) = route_cutoffs(inst, Route::MostlyRegular) {
            if let Ok((_, flow, _)) = iron_instance(inst, &cutoffs) {
                files.push((
                    "ironed_virtual_values.csv".to_string(),
                    to_csv(&header, virtual_value_rows(&virtual_values(inst, &flow))),
                ));
            }
        }
    }
    files
}

/// Writes every file through a temporary sibling and a rename, so a failed
/// run leaves no partial files behind.
pub fn write_files(dir: &Path, files: &[(String, String)]) -> Result<Vec<PathBuf>, CliError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| CliError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io(dir))?;
    let mut staged = Vec::new();
    for (name, contents) in files {
        let tmp = dir.join(format!(".{name}.tmp"));
        if let Err(e) = fs::write(&tmp, contents) {
            for (t, _) in &staged {
                let _ = fs::remove_file(t);
            }
            return Err(io(&tmp)(e));
        }
        staged.push((tmp, dir.join(name)));
    }
    for (tmp, target) in &staged {
        fs::rename(tmp, target).map_err(io(target))?;
    }
    Ok(staged.into_iter().map(|(_, target)| target).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use upl_core::fixtures::inst_b;

    #[test]
    fn inst_b_rows() {
        let files = plot_files(&inst_b());
        let names: Vec<&str> = files.iter().map(|(n, _)| n.as_str()).collect();
        assert_eq!(
            names,
            [
                "pseudo_revenue_item1.csv",
                "pseudo_revenue_item2.csv",
                "virtual_values.csv",
                "ironed_virtual_values.csv"
            ]
        );
        let item1: Vec<&str> = files[0].1.lines().collect();
        assert_eq!(item1[0], "i,R,Rbar,R_f,Rbar_f");
        assert!(item1[2].starts_with("2,5/8,3/4,"));
        assert!(files[1].1.lines().nth(2).unwrap().starts_with("2,25/32,1,"));
    }
}
