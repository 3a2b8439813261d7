use grasslattice::codec::{encode, BitWord, CodecConfig};
use grasslattice::simkit::fmt_f64;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    run_in(args, None)
}

fn run_in(args: &[&str], seed_env: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_grasslattice"));
    cmd.args(args).env_remove("GRASS_SEED");
    if let Some(seed) = seed_env {
        cmd.env("GRASS_SEED", seed);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct TempDir(PathBuf);

impl TempDir {
    fn new(tag: &str) -> Self {
        let dir =
            std::env::temp_dir().join(format!("grasslattice-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Self(dir)
    }

    fn path(&self, name: &str) -> String {
        self.0.join(name).to_string_lossy().into_owned()
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.0);
    }
}

fn parse_row(s: &str) -> Vec<f64> {
    s.trim().split(',').map(|v| v.parse().unwrap()).collect()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect()
}

#[test]
fn encode_prints_library_codeword() {
    let out = run(&[
        "encode", "--T", "3", "--B", "2", "--alpha", "0.13", "--bits", "01101100",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let cfg = CodecConfig::new(3, 2, 0.13).unwrap();
    let x = encode(&"01101100".parse().unwrap(), &cfg).unwrap();
    let expect: Vec<String> = x
        .as_vector()
        .iter()
        .flat_map(|c| [fmt_f64(c.re), fmt_f64(c.im)])
        .collect();
    assert_eq!(stdout(&out).trim(), expect.join(","));
    // agreement at 15 significant digits after a parse roundtrip
    for (got, want) in parse_row(&stdout(&out))
        .iter()
        .zip(x.as_vector().iter().flat_map(|c| [c.re, c.im]))
    {
        assert_eq!(format!("{got:.14e}"), format!("{want:.14e}"));
    }
}

#[test]
fn encode_opposite_words_are_mirror_images() {
    let a = parse_row(&stdout(&run(&[
        "encode", "--T", "2", "--B", "1", "--alpha", "0.1", "--bits", "00",
    ])));
    let b = parse_row(&stdout(&run(&[
        "encode", "--T", "2", "--B", "1", "--alpha", "0.1", "--bits", "11",
    ])));
    assert_eq!(a.len(), 4);
    assert!((a[0] - b[0]).abs() < 1e-15 && a[1] == 0.0 && b[1] == 0.0);
    assert!((a[2] + b[2]).abs() < 1e-15 && (a[3] + b[3]).abs() < 1e-15);
}

#[test]
fn encode_rejects_bad_bits() {
    let out = run(&[
        "encode", "--T", "2", "--B", "1", "--alpha", "0.1", "--bits", "011",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--bits"));
    let out = run(&[
        "encode", "--T", "2", "--B", "1", "--alpha", "0.1", "--bits", "0x",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&[
        "encode", "--T", "2", "--B", "1", "--alpha", "0.7", "--bits", "01",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--alpha"));
    let out = run(&["encode", "--B", "1", "--alpha", "0.1", "--bits", "01"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--T"));
}

fn write_block(path: &str, x: &[f64], h: &[(f64, f64)]) {
    // rows of y_t = x_t h^T, interleaved re/im per antenna
    let mut text = String::from("# received block\n");
    for t in 0..x.len() / 2 {
        let (xr, xi) = (x[2 * t], x[2 * t + 1]);
        let row: Vec<String> = h
            .iter()
            .flat_map(|&(hr, hi)| {
                [
                    format!("{:.17e}", xr * hr - xi * hi),
                    format!("{:.17e}", xr * hi + xi * hr),
                ]
            })
            .collect();
        text.push_str(&row.join(","));
        text.push('\n');
    }
    std::fs::write(path, text).unwrap();
}

#[test]
fn decode_recovers_word_and_flags_bad_blocks() {
    let dir = TempDir::new("decode");
    let flags = ["--T", "2", "--B", "1", "--alpha", "0.1"];
    let x = parse_row(&stdout(&run(
        &[&["encode"], &flags[..], &["--bits", "01"]].concat()
    )));

    let one = dir.path("one.csv");
    write_block(&one, &x, &[(0.3, -1.2)]);
    let out = run(&[&["decode"], &flags[..], &["--block", &one]].concat());
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "01");

    let multi = dir.path("multi.csv");
    write_block(&multi, &x, &[(0.3, -1.2), (-0.7, 0.1), (1.5, 0.4)]);
    assert_eq!(
        stdout(&run(
            &[&["decode"], &flags[..], &["--block", &multi]].concat()
        ))
        .trim(),
        "01"
    );

    let zero = dir.path("zero.csv");
    std::fs::write(&zero, "0,0\n0,0\n").unwrap();
    assert_eq!(
        run(&[&["decode"], &flags[..], &["--block", &zero]].concat())
            .status
            .code(),
        Some(3)
    );

    let bad = dir.path("bad.csv");
    std::fs::write(&bad, "1,0\nfoo,0\n").unwrap();
    let out = run(&[&["decode"], &flags[..], &["--block", &bad]].concat());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--block"));

    let tall = dir.path("tall.csv");
    std::fs::write(&tall, "1,0\n0,1\n1,1\n").unwrap();
    assert_eq!(
        run(&[&["decode"], &flags[..], &["--block", &tall]].concat())
            .status
            .code(),
        Some(2)
    );

    let missing = dir.path("missing.csv");
    assert_eq!(
        run(&[&["decode"], &flags[..], &["--block", &missing]].concat())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn simulate_writes_manifest_and_is_reproducible() {
    let dir = TempDir::new("simulate");
    let (a, b) = (dir.path("a.csv"), dir.path("b.csv"));
    let args = [
        "simulate",
        "--T",
        "2",
        "--B",
        "2",
        "--alpha",
        "0.14",
        "--N",
        "1",
        "--snr-list",
        "100",
        "--max-blocks",
        "2000",
        "--seed",
        "3",
        "--timestamp",
        "42",
    ];
    assert!(run(&[&args[..], &["--out", &a]].concat()).status.success());
    assert!(run(&[&args[..], &["--out", &b]].concat()).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    for key in [
        "# scheme=grasslattice",
        "# T=2",
        "# B=2",
        "# alpha=0.14",
        "# N=1",
        "# seed=3",
        "# timestamp=42",
        "# tool=grasslattice",
    ] {
        assert!(text.contains(key), "missing {key}");
    }
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 1);
    let fields: Vec<&str> = rows[0].split(',').collect();
    assert_eq!(fields[3], "0");
    assert_eq!(fields[5].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn seed_precedence() {
    let dir = TempDir::new("seed");
    let base = [
        "simulate",
        "--T",
        "2",
        "--B",
        "1",
        "--alpha",
        "0.2",
        "--snr-list",
        "5",
        "--max-blocks",
        "512",
        "--timestamp",
        "1",
    ];
    let read = |p: &str| std::fs::read_to_string(p).unwrap();
    let env_out = dir.path("env.csv");
    assert!(
        run_in(&[&base[..], &["--out", &env_out]].concat(), Some("77"))
            .status
            .success()
    );
    assert!(read(&env_out).contains("# seed=77"));
    let flag_out = dir.path("flag.csv");
    assert!(run_in(
        &[&base[..], &["--seed", "5", "--out", &flag_out]].concat(),
        Some("77")
    )
    .status
    .success());
    assert!(read(&flag_out).contains("# seed=5"));
    let none = dir.path("none.csv");
    assert!(run(&[&base[..], &["--out", &none]].concat())
        .status
        .success());
    assert!(read(&none).contains("# seed=1"));
    let bad = run_in(&[&base[..], &["--out", &none]].concat(), Some("abc"));
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = TempDir::new("config");
    let cfg = dir.path("run.cfg");
    std::fs::write(
        &cfg,
        "T=2\nB=1\nalpha=0.2\nsnr_list=0,10\nmax_blocks=256\nmin_errors=1\nseed=8\ntimestamp=5\n",
    )
    .unwrap();
    let out = dir.path("out.csv");
    let o = run(&[
        "simulate",
        "--config",
        &cfg,
        "--snr-list",
        "3",
        "--out",
        &out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(
        text.contains("# snr_list=3") && text.contains("# seed=8") && text.contains("# alpha=0.2")
    );
    assert_eq!(data_rows(&text).len(), 1);

    std::fs::write(&cfg, "T=two\n").unwrap();
    let o = run(&["simulate", "--config", &cfg, "--snr-list", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&[
        "simulate",
        "--config",
        &dir.path("absent.cfg"),
        "--snr-list",
        "3",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mlfile_scheme() {
    let dir = TempDir::new("mlfile");
    let o = run(&[
        "simulate",
        "--scheme",
        "mlfile",
        "--N",
        "1",
        "--snr-list",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--codebook"));

    let cb = dir.path("cb.txt");
    assert!(
        run(&["codebook", "--T", "2", "--B", "1", "--alpha", "0.2", "--out", &cb])
            .status
            .success()
    );
    let text = std::fs::read_to_string(&cb).unwrap();
    assert!(text.starts_with("# grasscodebook v1 T=2 K=4"));
    let o = run(&[
        "simulate",
        "--scheme",
        "mlfile",
        "--codebook",
        &cb,
        "--snr-list",
        "100",
        "--max-blocks",
        "1000",
        "--timestamp",
        "0",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("# K=4"));
    assert_eq!(data_rows(&text)[0].split(',').nth(3), Some("0"));

    let broken = dir.path("broken.txt");
    std::fs::write(&broken, "# grasscodebook v1 T=2 K=3\n1,0,0,0\n").unwrap();
    let o = run(&[
        "simulate",
        "--scheme",
        "mlfile",
        "--codebook",
        &broken,
        "--snr-list",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pilot_scheme_runs() {
    let o = run(&[
        "simulate",
        "--scheme",
        "pilot",
        "--T",
        "2",
        "--B",
        "2",
        "--snr-list",
        "100",
        "--max-blocks",
        "1000",
        "--timestamp",
        "0",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("# qam_order=16") && text.contains("# power_split=0.5"));
    assert_eq!(data_rows(&text)[0].split(',').nth(3), Some("0"));
    let o = run(&[
        "simulate",
        "--scheme",
        "pilot",
        "--T",
        "2",
        "--qam-order",
        "8",
        "--snr-list",
        "10",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hopf_export() {
    let o = run(&["hopf", "--T", "2", "--B", "4", "--alpha", "0.1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows = data_rows(&text);
    for stage in ["lattice", "gaussian", "ball", "sphere"] {
        let n = rows
            .iter()
            .filter(|r| r.starts_with(&format!("{stage},")))
            .count();
        assert_eq!(n, 256, "{stage}");
    }
    assert!(text.lines().any(|l| l == "stage,idx,c0,c1,c2"));
    for row in rows.iter().filter(|r| r.starts_with("sphere,")) {
        let v: Vec<f64> = row.split(',').skip(2).map(|x| x.parse().unwrap()).collect();
        assert!(((v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt() - 1.0).abs() < 1e-12);
    }
    assert_eq!(
        run(&["hopf", "--T", "3", "--B", "1", "--alpha", "0.1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn min_chordal_column_is_unimodal() {
    let o = run(&["min-chordal", "--T", "2", "--B", "2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("# chordal_distance=sqrt(1-|x^H y|^2)"));
    let d: Vec<f64> = data_rows(&text)
        .iter()
        .map(|r| r.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(d.len(), 20);
    let peak = d
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert!(peak > 0 && peak < d.len() - 1);
    assert!(
        d[..=peak].windows(2).all(|w| w[1] >= w[0]) && d[peak..].windows(2).all(|w| w[1] <= w[0])
    );
}

#[test]
fn sweep_single_point_echoes_alpha() {
    let dir = TempDir::new("sweep");
    let out = dir.path("sweep.csv");
    let o = run(&[
        "sweep-alpha",
        "--T",
        "2",
        "--B",
        "1",
        "--alpha-grid",
        "0.23",
        "--max-blocks",
        "512",
        "--timestamp",
        "0",
        "--out",
        &out,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "alpha_star=0.23");
    assert!(std::fs::read_to_string(&out)
        .unwrap()
        .contains("# alpha_star=0.23"));
    let o = run(&["sweep-alpha", "--T", "2", "--B", "1", "--alpha-grid", "0.6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn default_alpha_comes_from_cache() {
    let dir = TempDir::new("cache");
    let cache = dir.path("alpha.cache");
    std::fs::write(
        &cache,
        "# grasslattice alpha cache v1\nT=2 B=1 N=1 snr_db=20 alpha=0.33\n",
    )
    .unwrap();
    let o = run(&[
        "encode",
        "--T",
        "2",
        "--B",
        "1",
        "--bits",
        "10",
        "--alpha-cache",
        &cache,
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let x = encode(
        &BitWord::new(vec![true, false]),
        &CodecConfig::new(2, 1, 0.33).unwrap(),
    )
    .unwrap();
    assert_eq!(parse_row(&stdout(&o))[2], x.as_vector()[1].re);
    assert!(Path::new(&cache).exists());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        run(&["simulate", "--scheme", "nope", "--snr-list", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "simulate",
            "--T",
            "2",
            "--B",
            "1",
            "--alpha",
            "0.1",
            "--snr-list",
            "a,b"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&["simulate", "--T", "2", "--B", "1", "--alpha", "0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
