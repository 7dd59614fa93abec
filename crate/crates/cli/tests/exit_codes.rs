use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};

use proptest::prelude::*;
use quadric_cli::commands::{cmd_check, cmd_jetdet, cmd_solve, cmd_tangency};
use quadric_cli::report::{EXIT_INPUT, EXIT_REFUTED, EXIT_VERIFIED};
use quadric_cli::RunReport;
use serde_json::{json, Value};

#[derive(Debug, Clone)]
enum Fault {
    None,
    Asymmetric(usize, usize, usize),
    BadNumber(usize),
    MissingForm,
    Truncate(usize),
    UnknownKey,
}

fn fault() -> impl Strategy<Value = Fault> {
    prop_oneof![
        2 => Just(Fault::None),
        1 => (0usize..3, 0usize..3, 0usize..3).prop_map(|(k, r, c)| Fault::Asymmetric(k, r, c)),
        1 => (0usize..3).prop_map(Fault::BadNumber),
        1 => Just(Fault::MissingForm),
        1 => (1usize..40).prop_map(Fault::Truncate),
        1 => Just(Fault::UnknownKey),
    ]
}

fn model_json(entries: &[i64]) -> Value {
    // three symmetric real 3x3 forms
    let forms: Vec<Value> = (0..3)
        .map(|k| {
            let e = |r: usize, c: usize| {
                let (a, b) = if r <= c { (r, c) } else { (c, r) };
                entries[k * 9 + a * 3 + b].to_string()
            };
            json!((0..3)
                .map(|r| (0..3).map(|c| e(r, c)).collect::<Vec<_>>())
                .collect::<Vec<_>>())
        })
        .collect();
    json!({ "n": 3, "d": 3, "forms": forms })
}

static NEXT: AtomicUsize = AtomicUsize::new(0);

fn write(text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quadric-exit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(format!("m{}.json", NEXT.fetch_add(1, Ordering::Relaxed)));
    std::fs::write(&p, text).unwrap();
    p
}

fn consistent(r: &RunReport) -> bool {
    r.exit_code == r.derived_exit_code()
        && [EXIT_VERIFIED, EXIT_REFUTED, EXIT_INPUT].contains(&r.exit_code)
        && (r.exit_code == EXIT_INPUT) == r.error.is_some()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn input_faults_map_to_exit_two(entries in proptest::collection::vec(-1i64..=1, 27), fault in fault()) {
        let mut v = model_json(&entries);
        let text = match &fault {
            Fault::None => v.to_string(),
            Fault::Asymmetric(k, r, c) => {
                let (r, c) = if r == c { (*r, (c + 1) % 3) } else { (*r, *c) };
                let old = v["forms"][k][r][c].as_str().unwrap().parse::<i64>().unwrap();
                v["forms"][k][r][c] = json!((old + 1).to_string());
                v.to_string()
            }
            Fault::BadNumber(k) => {
                v["forms"][k][0][0] = json!("1/0");
                v.to_string()
            }
            Fault::MissingForm => {
                v["forms"].as_array_mut().unwrap().pop();
                v.to_string()
            }
            Fault::Truncate(cut) => {
                let s = v.to_string();
                s[..s.len().saturating_sub(*cut)].to_string()
            }
            Fault::UnknownKey => {
                v["extra"] = json!(1);
                v.to_string()
            }
        };
        let path = write(&text);
        let path = path.to_str().unwrap();
        let r = cmd_check(path, 1_000_000, None);
        prop_assert!(consistent(&r));
        match fault {
            Fault::None => prop_assert_ne!(r.exit_code, EXIT_INPUT, "{:?}", r.error),
            _ => prop_assert_eq!(r.exit_code, EXIT_INPUT),
        }
        let t = cmd_tangency(path, "X");
        prop_assert!(consistent(&t));
        // X lives on C^4 x C^5, so a valid 3x3 model is a dimension error
        prop_assert_eq!(t.exit_code, EXIT_INPUT);
    }

    #[test]
    fn refutations_are_never_input_errors(entries in proptest::collection::vec(-1i64..=1, 27), mu in -2i32..=0) {
        let path = write(&model_json(&entries).to_string());
        let path = path.to_str().unwrap();
        let r = cmd_solve(path, mu..=mu);
        prop_assert!(consistent(&r));
        prop_assert_eq!(r.exit_code, EXIT_VERIFIED);
        let j = cmd_jetdet(path, 0, mu);
        prop_assert!(consistent(&j));
        prop_assert_ne!(j.exit_code, EXIT_INPUT);
    }
}
