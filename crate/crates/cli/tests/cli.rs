//! End-to-end tests driving the compiled binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use biostego_core::raster::{load_gray, save_gray};
use biostego_core::synthetic::{demo_fingerprint, impostor_fingerprint};

const BIN: &str = env!("CARGO_BIN_EXE_biostego");

struct Env {
    _dir: tempfile::TempDir,
    root: PathBuf,
    store: PathBuf,
    alice: PathBuf,
    mallory: PathBuf,
}

impl Env {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let root = dir.path().to_path_buf();
        let store = root.join("store");
        let alice = root.join("alice.pgm");
        let mallory = root.join("mallory.pgm");
        save_gray(&demo_fingerprint().render(), &alice).unwrap();
        save_gray(&impostor_fingerprint().render(), &mallory).unwrap();
        Self { _dir: dir, root, store, alice, mallory }
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(BIN)
            .arg("--store")
            .arg(&self.store)
            .args(args)
            .output()
            .expect("binary runs")
    }

    fn enroll_alice(&self) {
        let out = self.run(&["enroll", "--user", "alice", "--fingerprint", self.alice.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "enroll failed: {}", stderr(&out));
    }
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).to_string()
}

#[test]
fn enroll_then_self_verify_accepts_with_score_100() {
    let env = Env::new();
    env.enroll_alice();
    let out = env.run(&["verify", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("score=100 accepted=true"), "got: {}", stdout(&out));
}

#[test]
fn verify_unknown_user_exits_2() {
    let env = Env::new();
    let out = env.run(&["verify", "--user", "ghost", "--fingerprint", env.alice.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not enrolled"));
}

#[test]
fn double_enroll_requires_overwrite() {
    let env = Env::new();
    env.enroll_alice();
    let out = env.run(&["enroll", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    let out = env.run(&[
        "enroll",
        "--user",
        "alice",
        "--fingerprint",
        env.alice.to_str().unwrap(),
        "--overwrite",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn impostor_probe_is_rejected() {
    let env = Env::new();
    env.enroll_alice();
    let out = env.run(&["verify", "--user", "alice", "--fingerprint", env.mallory.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("accepted=false"));
}

#[test]
fn blank_probe_is_rejected_not_errored() {
    let env = Env::new();
    env.enroll_alice();
    let blank = env.root.join("blank.pgm");
    save_gray(&biostego_core::GrayImage::filled(64, 64, 128), &blank).unwrap();
    let out = env.run(&["verify", "--user", "alice", "--fingerprint", blank.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("score=0 accepted=false"));
}

#[test]
fn lsb_send_receive_roundtrip() {
    let env = Env::new();
    env.enroll_alice();
    let cover = env.root.join("cover.pgm");
    save_gray(
        &biostego_core::GrayImage::from_fn(128, 128, |x, y| ((x * 31 + y * 7) % 256) as u8),
        &cover,
    )
    .unwrap();
    let payload = env.root.join("secret.bin");
    std::fs::write(&payload, b"attack at dawn \x00\x01\x02\xff").unwrap();
    let stego = env.root.join("stego.pgm");
    let out = env.run(&[
        "send", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap(),
        "--channel", "lsb", "--payload", payload.to_str().unwrap(),
        "--cover", cover.to_str().unwrap(), "--out", stego.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));

    // Stego image deviates from the cover by at most the LSB.
    let c = load_gray(&cover).unwrap();
    let s = load_gray(&stego).unwrap();
    for (a, b) in c.data().iter().zip(s.data()) {
        assert!((*a as i16 - *b as i16).abs() <= 1);
    }

    let recovered = env.root.join("recovered.bin");
    let out = env.run(&[
        "receive", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap(),
        "--channel", "lsb", "--input", stego.to_str().unwrap(),
        "--out", recovered.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(std::fs::read(&recovered).unwrap(), b"attack at dawn \x00\x01\x02\xff");
}

#[test]
fn list_send_receive_roundtrip() {
    let env = Env::new();
    env.enroll_alice();
    let payload = env.root.join("note.txt");
    std::fs::write(&payload, "meet at noon").unwrap();
    let playlist = env.root.join("playlist.txt");
    let out = env.run(&[
        "send", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap(),
        "--channel", "list", "--payload", payload.to_str().unwrap(),
        "--bank", bank_path().to_str().unwrap(), "--seed", "42",
        "--out", playlist.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = std::fs::read_to_string(&playlist).unwrap();
    assert_eq!(text.lines().count(), "meet at noon".len() * 2 + 1);

    let recovered = env.root.join("note-back.txt");
    let out = env.run(&[
        "receive", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap(),
        "--channel", "list", "--input", playlist.to_str().unwrap(),
        "--out", recovered.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(std::fs::read_to_string(&recovered).unwrap(), "meet at noon");
}

#[test]
fn rejected_send_writes_no_output() {
    let env = Env::new();
    env.enroll_alice();
    let cover = env.root.join("cover.pgm");
    save_gray(&biostego_core::GrayImage::filled(64, 64, 100), &cover).unwrap();
    let payload = env.root.join("p.txt");
    std::fs::write(&payload, "nope").unwrap();
    let out_file = env.root.join("should-not-exist.pgm");
    let out = env.run(&[
        "send", "--user", "alice", "--fingerprint", env.mallory.to_str().unwrap(),
        "--channel", "lsb", "--payload", payload.to_str().unwrap(),
        "--cover", cover.to_str().unwrap(), "--out", out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    assert!(stderr(&out).contains("authentication failed"));
    assert!(!out_file.exists(), "gate leaked channel output");
}

#[test]
fn receive_on_plain_cover_reports_no_magic() {
    let env = Env::new();
    env.enroll_alice();
    let plain = env.root.join("plain.pgm");
    save_gray(&biostego_core::GrayImage::filled(64, 64, 100), &plain).unwrap();
    let out_file = env.root.join("none.bin");
    let out = env.run(&[
        "receive", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap(),
        "--channel", "lsb", "--input", plain.to_str().unwrap(),
        "--out", out_file.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("magic"));
    assert!(!out_file.exists());
}

#[test]
fn send_without_cover_is_usage_error() {
    let env = Env::new();
    env.enroll_alice();
    let payload = env.root.join("p.txt");
    std::fs::write(&payload, "x").unwrap();
    let out = env.run(&[
        "send", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap(),
        "--channel", "lsb", "--payload", payload.to_str().unwrap(),
        "--out", env.root.join("o.pgm").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_writes_six_images_and_report() {
    let env = Env::new();
    env.enroll_alice();
    let out_dir = env.root.join("analysis");
    let out = env.run(&[
        "analyze", "--fingerprint", env.alice.to_str().unwrap(),
        "--out-dir", out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for name in ["equalized.pgm", "enhanced.pgm", "binarized.pgm", "roi.pgm", "thinned.pgm", "minutiae.pgm"] {
        assert!(out_dir.join(name).exists(), "missing {name}");
    }
    let images = std::fs::read_dir(&out_dir)
        .unwrap()
        .filter(|e| {
            e.as_ref().unwrap().path().extension().map(|x| x == "pgm").unwrap_or(false)
        })
        .count();
    assert_eq!(images, 6);

    let report = std::fs::read_to_string(out_dir.join("report.txt")).unwrap();
    // Final count in the report equals the enrolled template's line count.
    let store_tpl = std::fs::read_to_string(env.store.join("alice.tpl")).unwrap();
    let template_lines = store_tpl.lines().count() - 1;
    assert!(
        report.contains(&format!("minutiae={template_lines} ")),
        "report: {report} template lines: {template_lines}"
    );

    // Overlay markers sit at template minutiae positions.
    let template =
        biostego_core::MinutiaeTemplate::parse(&store_tpl).unwrap();
    let overlay = load_gray(out_dir.join("minutiae.pgm")).unwrap();
    for m in &template.minutiae {
        let mut found = false;
        for dy in -2i64..=2 {
            for dx in -2i64..=2 {
                let (x, y) = (m.x as i64 + dx, m.y as i64 + dy);
                if x >= 0 && y >= 0 && (x as u32) < overlay.width() && (y as u32) < overlay.height() {
                    let v = overlay.get(x as u32, y as u32);
                    if v == 96 || v == 160 {
                        found = true;
                    }
                }
            }
        }
        assert!(found, "no marker near template minutia ({}, {})", m.x, m.y);
    }
}

#[test]
fn tiff_fingerprints_and_covers_work_end_to_end() {
    let env = Env::new();
    // Re-save the fingerprint and cover as TIFF and run the whole flow on
    // them.
    let finger_tif = env.root.join("alice.tif");
    save_gray(&load_gray(&env.alice).unwrap(), &finger_tif).unwrap();
    let out = env.run(&["enroll", "--user", "alice", "--fingerprint", finger_tif.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = env.run(&["verify", "--user", "alice", "--fingerprint", finger_tif.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("score=100 accepted=true"));

    let cover = env.root.join("cover.tif");
    save_gray(
        &biostego_core::GrayImage::from_fn(96, 96, |x, y| ((x * 5 + y * 11) % 256) as u8),
        &cover,
    )
    .unwrap();
    let payload = env.root.join("p.bin");
    std::fs::write(&payload, b"tiff channel payload").unwrap();
    let stego = env.root.join("stego.tif");
    let out = env.run(&[
        "send", "--user", "alice", "--fingerprint", finger_tif.to_str().unwrap(),
        "--channel", "lsb", "--payload", payload.to_str().unwrap(),
        "--cover", cover.to_str().unwrap(), "--out", stego.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let back = env.root.join("p-back.bin");
    let out = env.run(&[
        "receive", "--user", "alice", "--fingerprint", finger_tif.to_str().unwrap(),
        "--channel", "lsb", "--input", stego.to_str().unwrap(),
        "--out", back.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(std::fs::read(&back).unwrap(), b"tiff channel payload");
}

#[test]
fn store_env_variable_is_honored() {
    let env = Env::new();
    let out = Command::new(BIN)
        .env("BIOSTEGO_STORE", &env.store)
        .args(["enroll", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(env.store.join("alice.tpl").exists());
}

#[test]
fn config_file_and_flag_overrides() {
    let env = Env::new();
    env.enroll_alice();
    // An impossible decision threshold from a config file rejects even a
    // perfect self-match.
    let cfg = env.root.join("strict.toml");
    std::fs::write(&cfg, "decision_threshold = 100\n").unwrap();
    let out = env.run(&[
        "--config", cfg.to_str().unwrap(),
        "verify", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "self-match still scores 100: {}", stdout(&out));

    // Flag overrides beat the file: an invalid threshold is usage error 2.
    let out = env.run(&[
        "--config", cfg.to_str().unwrap(),
        "--decision-threshold", "101",
        "verify", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // A stricter minutiae floor makes enrollment fail as a data error.
    let out = env.run(&[
        "--min-minutiae", "50",
        "enroll", "--user", "bob", "--fingerprint", env.alice.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(stderr(&out).contains("too few minutiae"));
}

#[test]
fn deterministic_outputs_across_runs() {
    let env = Env::new();
    env.enroll_alice();
    let first = std::fs::read_to_string(env.store.join("alice.tpl")).unwrap();
    let out = env.run(&[
        "enroll", "--user", "alice", "--fingerprint", env.alice.to_str().unwrap(), "--overwrite",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let second = std::fs::read_to_string(env.store.join("alice.tpl")).unwrap();
    assert_eq!(first, second);
}

fn bank_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../assets/songbank.txt")
}
