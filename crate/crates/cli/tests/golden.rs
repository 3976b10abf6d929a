mod common;

use std::process::Command;

#[test]
fn golden_cases() {
    let failures: Vec<String> = common::cases()
        .iter()
        .filter_map(|c| common::check(c).err())
        .collect();
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn case_names_are_unique() {
    let mut names: Vec<&str> = common::cases().iter().map(|c| c.name).collect();
    let n = names.len();
    names.sort_unstable();
    names.dedup();
    assert_eq!(names.len(), n);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rel.txt");
    let status = Command::new(env!("CARGO_BIN_EXE_symtree"))
        .args(["derive-relation", "--tree", "s3.tre", "--output"])
        .arg(&out)
        .current_dir(common::golden_dir().join("inputs"))
        .status()
        .unwrap();
    assert!(status.success());
    let want =
        std::fs::read(common::golden_dir().join("expected/derive_relation_sym.out")).unwrap();
    assert_eq!(std::fs::read(out).unwrap(), want);
}

#[test]
fn ternary_round_trip_through_stdin() {
    use std::io::Write;
    use std::process::Stdio;
    let inputs = common::golden_dir().join("inputs");
    let derived = Command::new(env!("CARGO_BIN_EXE_symtree"))
        .args(["derive-ternary", "--tree", "caterpillar.tre"])
        .current_dir(&inputs)
        .output()
        .unwrap();
    let mut child = Command::new(env!("CARGO_BIN_EXE_symtree"))
        .args(["reconstruct-ternary", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(&derived.stdout)
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let input = std::fs::read_to_string(inputs.join("caterpillar.tre")).unwrap();
    let want = symtree::tree::parse_tree(&input)
        .unwrap()
        .dated()
        .unwrap()
        .canonical_form();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want);
}
