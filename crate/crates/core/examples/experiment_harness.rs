//! Run experiment specs, keep the records as JSON lines, print a report.
use binform::harness::{read_jsonl, report, run_all, append_jsonl, ExperimentSpec, ReportFormat};

const SPECS: &str = r#"[
  {"id": "diag-k2", "kind": "diagonal-bound", "k": 2,
   "coefficient_source": {"named": ["sqrt2", "sqrt3"]}, "X_grid": [50, 100, 200, 400], "epsilon": 0.1},
  {"id": "cubic-exhaustive", "kind": "theorem-bound", "k": 3, "l": 1,
   "coefficient_source": "seeded", "seed": 11, "X_grid": [20, 40, 80, 160], "epsilon": 0.1},
  {"id": "far", "kind": "lemma21", "k": 2, "coefficient_source": "seeded", "seed": 3,
   "X_grid": [100, 1000], "epsilon": 0.1, "h": 12},
  {"id": "sums", "kind": "appendixA", "k": 5, "l": 2, "coefficient_source": "seeded",
   "X_grid": [10, 100, 1000], "epsilon": 0.1}
]"#;

fn main() {
    let specs: Vec<ExperimentSpec> = serde_json::from_str(SPECS).unwrap();
    let records: Vec<_> = run_all(&specs).into_iter().map(Result::unwrap).collect();
    let path = std::env::temp_dir().join("binform-example.jsonl");
    let _ = std::fs::remove_file(&path);
    append_jsonl(&path, &records).unwrap();
    let back = read_jsonl(&path).unwrap();
    println!("{}", report(&back, ReportFormat::Md));
    println!("records written to {}", path.display());
}
