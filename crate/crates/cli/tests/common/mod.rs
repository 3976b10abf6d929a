//! Golden cases for the command-line tool.

use std::fs;
use std::path::PathBuf;
use std::process::Command;

pub struct Case {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
}

macro_rules! case {
    ($name:literal, $code:literal, [$($arg:literal),* $(,)?]) => {
        Case { name: $name, args: &[$($arg),*], code: $code }
    };
}

pub fn cases() -> Vec<Case> {
    vec![
        case!(
            "derive_relation_sym",
            0,
            ["derive-relation", "--tree", "s3.tre"]
        ),
        case!(
            "derive_relation_dir",
            0,
            ["derive-relation", "--tree", "rooted.tre", "--mode", "dir"]
        ),
        case!(
            "derive_relation_unrooted_dir",
            2,
            ["derive-relation", "--tree", "s3.tre", "--mode", "dir"]
        ),
        case!(
            "derive_relation_unlabeled",
            2,
            ["derive-relation", "--tree", "quartet.tre"]
        ),
        case!(
            "derive_ternary",
            0,
            ["derive-ternary", "--tree", "caterpillar.tre"]
        ),
        case!(
            "check_relation_ok",
            0,
            ["check-relation", "--input", "mixed.rel"]
        ),
        case!(
            "check_relation_cycle",
            3,
            ["check-relation", "--input", "triangle.rel"]
        ),
        case!(
            "check_relation_in_pointer",
            3,
            ["check-relation", "--input", "in_pointer.rel"]
        ),
        case!(
            "check_relation_syntax",
            2,
            ["check-relation", "--input", "bad.rel"]
        ),
        case!(
            "check_relation_missing_file",
            2,
            ["check-relation", "--input", "absent.rel"]
        ),
        case!(
            "check_ternary_ok",
            0,
            ["check-ternary", "--input", "caterpillar.ter"]
        ),
        case!(
            "check_ternary_five_five",
            3,
            ["check-ternary", "--input", "five_five.ter"]
        ),
        case!(
            "check_ternary_condition3",
            3,
            ["check-ternary", "--input", "condition3.ter"]
        ),
        case!(
            "check_ternary_binary",
            3,
            ["check-ternary", "--input", "star4.ter", "--require-binary"]
        ),
        case!(
            "check_ternary_missing",
            2,
            ["check-ternary", "--input", "missing.ter"]
        ),
        case!(
            "reconstruct_relation",
            0,
            ["reconstruct-relation", "--input", "s3.rel"]
        ),
        case!(
            "reconstruct_relation_two_isolated",
            0,
            ["reconstruct-relation", "--input", "two_isolated.rel"]
        ),
        case!(
            "reconstruct_relation_all_binary",
            0,
            [
                "reconstruct-relation",
                "--input",
                "empty4.rel",
                "--all-binary"
            ]
        ),
        case!(
            "reconstruct_relation_two_components",
            4,
            [
                "reconstruct-relation",
                "--input",
                "two_isolated.rel",
                "--all-binary"
            ]
        ),
        case!(
            "reconstruct_relation_degree2",
            0,
            [
                "reconstruct-relation",
                "--input",
                "two_isolated.rel",
                "--all-binary",
                "--allow-degree2-root"
            ]
        ),
        case!(
            "reconstruct_relation_directed",
            0,
            ["reconstruct-relation", "--input", "path.rel"]
        ),
        case!(
            "reconstruct_relation_root",
            0,
            [
                "reconstruct-relation",
                "--input",
                "two_paths.rel",
                "--root",
                "a"
            ]
        ),
        case!(
            "reconstruct_relation_bad_root",
            2,
            [
                "reconstruct-relation",
                "--input",
                "two_paths.rel",
                "--root",
                "c"
            ]
        ),
        case!(
            "reconstruct_relation_in_pointer",
            3,
            ["reconstruct-relation", "--input", "in_pointer.rel"]
        ),
        case!(
            "reconstruct_ternary",
            0,
            ["reconstruct-ternary", "--input", "caterpillar.ter"]
        ),
        case!(
            "reconstruct_ternary_star",
            0,
            ["reconstruct-ternary", "--input", "star4.ter"]
        ),
        case!(
            "reconstruct_ternary_six_taxa",
            4,
            ["reconstruct-ternary", "--input", "six_taxa.ter"]
        ),
        case!(
            "quartets_tree",
            0,
            ["quartets", "--tree", "caterpillar.tre"]
        ),
        case!(
            "quartets_ternary",
            0,
            ["quartets", "--ternary", "caterpillar.ter"]
        ),
        case!(
            "quartets_conflict",
            3,
            ["quartets", "--ternary", "six_taxa.ter"]
        ),
        case!("quartet_tree", 0, ["quartet-tree", "--input", "five.qrt"]),
        case!(
            "quartet_tree_conflict",
            4,
            ["quartet-tree", "--input", "conflict.qrt"]
        ),
        case!("roots", 0, ["roots", "--input", "mixed.rel"]),
        case!("roots_directed", 0, ["roots", "--input", "two_paths.rel"]),
        case!("roots_none", 4, ["roots", "--input", "no_center.rel"]),
        case!(
            "dev_trees",
            0,
            ["dev", "enumerate", "trees", "--taxa", "a,b,c,d"]
        ),
        case!(
            "dev_trees_count",
            0,
            [
                "dev",
                "enumerate",
                "trees",
                "--taxa",
                "a,b,c,d,e,f,g",
                "--count"
            ]
        ),
        case!(
            "dev_trees_too_large",
            2,
            [
                "dev",
                "enumerate",
                "trees",
                "--taxa",
                "a,b,c,d,e,f,g,h,i",
                "--count"
            ]
        ),
        case!(
            "dev_labelings",
            0,
            [
                "dev",
                "enumerate",
                "labelings",
                "--tree",
                "quartet.tre",
                "--count"
            ]
        ),
        case!(
            "dev_datings",
            0,
            [
                "dev",
                "enumerate",
                "datings",
                "--tree",
                "quartet.tre",
                "--colors",
                "A,B",
                "--discriminating"
            ]
        ),
        case!(
            "dev_explainers",
            0,
            [
                "dev",
                "enumerate",
                "explainers",
                "--input",
                "s3.rel",
                "--max-vertices",
                "4"
            ]
        ),
        case!(
            "unknown_flag",
            2,
            ["check-relation", "--input", "s3.rel", "--verbose"]
        ),
    ]
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Run {
    pub stdout: Vec<u8>,
    pub stderr: Vec<u8>,
    pub code: i32,
}

pub fn run(case: &Case) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_symtree"))
        .args(case.args)
        .current_dir(golden_dir().join("inputs"))
        .output()
        .expect("binary runs");
    Run {
        stdout: out.stdout,
        stderr: out.stderr,
        code: out.status.code().unwrap_or(-1),
    }
}

/// Compares one case against its golden files and against a rerun.
pub fn check(case: &Case) -> Result<(), String> {
    let first = run(case);
    let second = run(case);
    if first.stdout != second.stdout || first.stderr != second.stderr || first.code != second.code {
        return Err(format!("{}: reruns differ", case.name));
    }
    if first.code != case.code {
        return Err(format!(
            "{}: exit code {} (expected {})",
            case.name, first.code, case.code
        ));
    }
    let dir = golden_dir().join("expected");
    for (ext, got) in [("out", &first.stdout), ("err", &first.stderr)] {
        let path = dir.join(format!("{}.{ext}", case.name));
        let want = fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        if &want != got {
            return Err(format!(
                "{}: {ext} differs\n--- expected\n{}--- got\n{}",
                case.name,
                String::from_utf8_lossy(&want),
                String::from_utf8_lossy(got)
            ));
        }
    }
    Ok(())
}
