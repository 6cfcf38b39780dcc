use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ofs_core::generalise::{cluster_partition, similarity_matrix};
use ofs_core::numeric::parse_grid;
use ofs_core::ofs::{parse_model, write_model, ObjectSet, OfsModel};
use ofs_core::token::Token;
use tempfile::TempDir;

fn root(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn golden(name: &str) -> OfsModel {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name);
    parse_model(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn ofs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ofs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        Fixture {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.file(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    /// Instantiates the syllable prototype on the monosyllable corpus.
    fn english(&self) -> PathBuf {
        let out = self.file("english.ofs");
        let o = ofs(&[
            "--alphabet",
            path(&root("data/english_monosyllables.alphabet")),
            "--no-require-stress",
            "instantiate",
            path(&root("prototypes/syllable.ofsp")),
            path(&root("data/english_monosyllables.txt")),
            "-o",
            path(&out),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        out
    }
}

#[test]
fn ingest_worked_example() {
    let f = Fixture::new();
    let rejects = f.file("rejects.tsv");
    let o = ofs(&[
        "--alphabet",
        path(&root("data/english_monosyllables.alphabet")),
        "--no-require-stress",
        "ingest",
        path(&root("data/english_monosyllables.txt")),
        "--rejects",
        path(&rejects),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 43);
    assert!(stderr(&o).contains("accepted 43, rejected 0"));
    assert_eq!(std::fs::read_to_string(rejects).unwrap(), "line\treason\n");
}

#[test]
fn ingest_rejects_do_not_fail_the_run() {
    let f = Fixture::new();
    let empty = f.write("empty.txt", "");
    let alphabet = root("data/english_monosyllables.alphabet");
    let o = ofs(&["--alphabet", path(&alphabet), "ingest", path(&empty)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("accepted 0, rejected 0"));
    // the unmarked corpus fails the default stress filter line by line
    let o = ofs(&["--alphabet", path(&alphabet), "ingest", path(&root("data/english_monosyllables.txt"))]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("accepted 0, rejected 43"));
}

#[test]
fn missing_input_is_a_data_error() {
    let o = ofs(&["stats", "/nonexistent/model.ofs"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/model.ofs"));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(ofs(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ofs(&["count"]).status.code(), Some(1));
    let f = Fixture::new();
    let m = f.english();
    assert_eq!(ofs(&["generalise", path(&m), "--tau", "0"]).status.code(), Some(1));
    assert_eq!(ofs(&["count", path(&m), "-k", "3..1"]).status.code(), Some(1));
    assert_eq!(ofs(&["--help"]).status.code(), Some(0));
}

#[test]
fn instantiate_worked_example() {
    let f = Fixture::new();
    let m = f.english();
    let got = parse_model(&std::fs::read_to_string(m).unwrap()).unwrap();
    assert_eq!(got.canonicalized(), golden("english_syllable.ofs").canonicalized());
}

#[test]
fn instantiate_prints_class_sizes() {
    let f = Fixture::new();
    let o = ofs(&[
        "--alphabet",
        path(&root("data/english_monosyllables.alphabet")),
        "--no-require-stress",
        "instantiate",
        path(&root("prototypes/syllable.ofsp")),
        path(&root("data/english_monosyllables.txt")),
        "-o",
        path(&f.file("m.ofs")),
    ]);
    assert_eq!(stdout(&o), "Onset\t19\nPeak\t13\nCoda\t25\n");
}

#[test]
fn one_word_keeps_one_branch() {
    let f = Fixture::new();
    let alphabet = f.write("a.alphabet", "t: C\nk: C\na: V\ni: V\n");
    let corpus = f.write("c.txt", "ta-'ki\n");
    let out = f.file("w.ofs");
    let o = ofs(&[
        "--alphabet",
        path(&alphabet),
        "instantiate",
        path(&root("prototypes/word12.ofsp")),
        path(&corpus),
        "-o",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m = parse_model(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(m.upper[0][0].rhs.to_string(), "S_ini_pr S_fin_st");
    let o = ofs(&["check", path(&out), "ta-'ki", "kita"]);
    assert_eq!(
        stdout(&o),
        "ta-'ki\taccepted\t(Word (S_ini_pr t a) (S_fin_st k i))\nkita\trejected\tk i t a\n"
    );
}

#[test]
fn unknown_class_in_prototype() {
    let f = Fixture::new();
    let proto = f.write(
        "p.ofsp",
        "ofs-model S levels=2\nlevel 1:\n  S => X\nlevel 0:\n  X = / (x: GLIDES*) [ANY]* /\n",
    );
    let o = ofs(&[
        "--alphabet",
        path(&root("data/english_monosyllables.alphabet")),
        "--no-require-stress",
        "instantiate",
        path(&proto),
        path(&root("data/english_monosyllables.txt")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("GLIDES"), "{}", stderr(&o));
}

#[test]
fn stats_report() {
    let f = Fixture::new();
    let m = f.english();
    let o = ofs(&["--round", "sim:2", "stats", path(&m)]);
    let text = stdout(&o);
    assert!(text.starts_with("class"));
    assert!(text.contains("unique (%)"));
    assert!(text.contains("Onset  Coda  7 (0.19)"), "{text}");
    let o = ofs(&["--format", "tsv", "stats", path(&m)]);
    let tsv = stdout(&o);
    assert!(tsv.contains("Onset\t19\t12\t63.16\n"));
    assert!(tsv.contains("Onset\tCoda\t7\t0.1892\t7/37\n"), "{tsv}");
}

#[test]
fn stats_toy_model() {
    let f = Fixture::new();
    let m = f.write(
        "toy.ofs",
        "ofs-model S levels=2\nterminals: a b c\nlevel 1:\n  S => X Y\nlevel 0:\n  X = { \"a\", \"b\" }\n  Y = { \"b\", \"c\" }\n",
    );
    let o = ofs(&["--format", "tsv", "stats", path(&m)]);
    assert_eq!(
        stdout(&o),
        "class\tall\tunique\tunique_pct\nX\t2\t1\t50.00\nY\t2\t1\t50.00\nTOTAL\t3\t2\t66.67\n\na\tb\tintersection\tsim\tsim_exact\nX\tY\t1\t0.3333\t1/3\n"
    );
}

#[test]
fn stats_on_empty_model_fails() {
    let f = Fixture::new();
    let m = f.write("e.ofs", "ofs-model S levels=0\nterminals:\n");
    let o = ofs(&["stats", path(&m)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generalise_worked_example() {
    let f = Fixture::new();
    let m = f.english();
    let out = f.file("g.ofs");
    let o = ofs(&["generalise", path(&m), "--tau", "0.18", "-o", path(&out)]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("Coda_Onset <- Coda Onset"));
    let g = parse_model(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(g.canonicalized(), golden("english_syllable_generalised.ofs").canonicalized());
    let o = ofs(&["generalise", path(&m), "--tau", "7/37"]);
    assert!(stdout(&o).contains("Coda_Onset Peak Coda_Onset"));
    let o = ofs(&["generalise", path(&m), "--tau", "1"]);
    assert_eq!(parse_model(&stdout(&o)).unwrap(), golden("english_syllable.ofs"));
}

#[test]
fn clustertree_sweep_matches_partitions() {
    let f = Fixture::new();
    let text = "ofs-model S levels=2\nterminals: a b c d\nlevel 1:\n  S => W X Y Z\nlevel 0:\n  W = { \"a\", \"b\" }\n  X = { \"b\", \"c\" }\n  Y = { \"a\", \"b\", \"c\" }\n  Z = { \"d\" }\n";
    let m = f.write("toy.ofs", text);
    let o = ofs(&["--format", "tsv", "clustertree", path(&m), "--grid", "0.25:1:0.25"]);
    let model = parse_model(text).unwrap();
    let matrix = similarity_matrix(&model).unwrap();
    let lines: Vec<String> = stdout(&o).lines().skip(1).map(str::to_string).collect();
    let grid = parse_grid("0.25:1:0.25").unwrap();
    assert_eq!(lines.len(), grid.len());
    for (line, tau) in lines.iter().zip(grid) {
        let expected = cluster_partition(&matrix, tau).to_string();
        assert_eq!(line.split('\t').nth(3).unwrap(), expected);
    }
    let dot = stdout(&ofs(&["--format", "dot", "clustertree", path(&m)]));
    assert!(dot.starts_with("digraph"));
    let tree = stdout(&ofs(&["--round", "sim:2", "clustertree", path(&m)]));
    assert!(tree.contains("2/3 (0.67)"), "{tree}");
}

fn sized(name: &str, n: usize) -> ObjectSet {
    let mut s = ObjectSet::new();
    for i in 0..n {
        s.insert(vec![Token::new(format!("{name}.{i}")).unwrap()]);
    }
    s
}

#[test]
fn count_model_three_shape() {
    let f = Fixture::new();
    let proto = std::fs::read_to_string(root("prototypes/word12.ofsp")).unwrap();
    let mut text: String = proto
        .lines()
        .take_while(|l| l.trim() != "level 0:")
        .map(|l| format!("{l}\n"))
        .collect();
    text.push_str("level 0:\n");
    let sizes = [
        ("S_mon_st", 5_028),
        ("S_mon_pl", 1_813),
        ("S_ini_st", 3_658),
        ("S_ini_pr", 707),
        ("S_ini_pl", 1_628),
        ("S_med_st", 2_527),
        ("S_med_pr", 618),
        ("S_med_po", 2_518),
        ("S_med_pl", 2_220),
        ("S_fin_st", 4_261),
        ("S_fin_po", 4_354),
        ("S_fin_pl", 3_716),
    ];
    for (name, _) in sizes {
        text.push_str(&format!("  {name} = {{ }}\n"));
    }
    let mut m = parse_model(&text).unwrap();
    for (rule, (_, n)) in m.base.iter_mut().zip(sizes) {
        rule.rhs = sized(&rule.name, n);
    }
    m.terminals = m.base.iter().flat_map(|r| r.rhs.iter().flatten().cloned()).collect();
    let p = f.write("model3.ofs", &write_model(&m));
    let o = ofs(&["--format", "tsv", "count", path(&p), "-k", "1..2"]);
    assert_eq!(
        stdout(&o),
        "slots\tderivations\tderivations_sci\tdistinct\tdistinct_sci\n1\t6841\t6.84e3\t\t\n2\t18939459\t1.89e7\t\t\n"
    );
}

#[test]
fn distinct_counts_respect_the_state_budget() {
    let f = Fixture::new();
    let m = f.english();
    let o = Command::new(env!("CARGO_BIN_EXE_ofs"))
        .args(["count", path(&m), "-k", "1", "--distinct"])
        .env("OFS_STATE_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains('2'));
    let o = ofs(&["count", path(&m), "-k", "1", "--distinct"]);
    assert!(o.status.success());
}

#[test]
fn check_corpus_word() {
    let f = Fixture::new();
    let m = f.english();
    let o = ofs(&["--alphabet", path(&root("data/english_monosyllables.alphabet")), "check", path(&m), "sprIN"]);
    assert_eq!(stdout(&o), "sprIN\taccepted\t(Syllable (Onset s p r) (Peak I) (Coda N))\n");
}

#[test]
fn enumerate_counts_slots() {
    let f = Fixture::new();
    let m = f.english();
    let out = f.file("g.ofs");
    assert!(ofs(&["generalise", path(&m), "--tau", "0.18", "-o", path(&out)]).status.success());
    assert_eq!(stdout(&ofs(&["enumerate", path(&out), "--max-k", "1"])), "");
    let all = stdout(&ofs(&["enumerate", path(&out), "--max-k", "3"]));
    assert_eq!(all.lines().count(), 17_797);
    assert_eq!(
        all.lines().next().unwrap(),
        "2\t(Syllable (Coda_Onset ε) (Peak 2) (Coda_Onset ε))"
    );
}

#[test]
fn reruns_are_byte_identical() {
    let f = Fixture::new();
    let run = |tag: &str| {
        let out = f.file(&format!("m{tag}.ofs"));
        let man = f.file(&format!("m{tag}.json"));
        let o = ofs(&[
            "--alphabet",
            path(&root("data/english_monosyllables.alphabet")),
            "--no-require-stress",
            "--manifest",
            path(&man),
            "instantiate",
            path(&root("prototypes/syllable.ofsp")),
            path(&root("data/english_monosyllables.txt")),
            "-o",
            path(&out),
        ]);
        assert!(o.status.success());
        (std::fs::read(out).unwrap(), std::fs::read_to_string(man).unwrap())
    };
    let (a, ma) = run("1");
    let (b, mb) = run("2");
    assert_eq!(a, b);
    assert_eq!(ma, mb);
    assert!(ma.contains("\"command\": \"instantiate\""));
    assert!(ma.contains("sha256"));
    let m = f.english();
    let s1 = ofs(&["clustertree", path(&m)]);
    let s2 = ofs(&["clustertree", path(&m)]);
    assert_eq!(s1.stdout, s2.stdout);
}

#[test]
fn pipeline_composes() {
    let f = Fixture::new();
    let alphabet = f.write("syn.alphabet", "p: C\nt: C\nk: C\nn: C\na: V\ni: V\nu: V\n");
    let corpus = f.write(
        "syn.txt",
        "# small marked list\n'pa\nta-'ki\n'ka-nu\npa-'ti-ka\n'nu-pa-ti-ka\npi-ta-'nu-ka\npa-ti-'ku\nbad-word\n\n",
    );
    let normalized = f.file("n.txt");
    let a = path(&alphabet);
    let o = ofs(&["--alphabet", a, "ingest", path(&corpus), "-o", path(&normalized)]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("accepted 7, rejected 2"), "{}", stderr(&o));
    let model = f.file("m.ofs");
    let o = ofs(&[
        "--alphabet",
        a,
        "instantiate",
        path(&root("prototypes/word12.ofsp")),
        path(&normalized),
        "-o",
        path(&model),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let general = f.file("g.ofs");
    assert!(ofs(&["generalise", path(&model), "--tau", "0.3", "-o", path(&general)]).status.success());
    for m in [&model, &general] {
        assert!(ofs(&["stats", path(m)]).status.success());
        assert!(ofs(&["count", path(m), "-k", "1..4", "--distinct"]).status.success());
        let o = ofs(&["--alphabet", a, "check", path(m), "pi-ta-'nu-ka", "'nu-pa-ti-ka"]);
        assert_eq!(stdout(&o).matches("\taccepted\t").count(), 2, "{}", stdout(&o));
    }
}
