//! End-to-end tests against the compiled binary: exit codes, output
//! formats, and byte-level determinism.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SQUARE_WKT: &str = "POLYGON((0 0, 10 0, 10 10, 0 10, 0 0))";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_areadecomp"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("failed to spawn binary")
}

fn write_square(dir: &Path) -> String {
    let path = dir.join("square.wkt");
    fs::write(&path, SQUARE_WKT).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn decompose_writes_all_outputs_and_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_square(dir.path());
    let out = dir.path().join("out.json");
    let stats = dir.path().join("stats.txt");
    let svg = dir.path().join("out.svg");
    let o = run(&[
        "decompose",
        &input,
        "--weights",
        "0.5,0.5",
        "--opt",
        "pfh",
        "--out",
        out.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));

    let geojson: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(geojson["type"], "FeatureCollection");
    let features = geojson["features"].as_array().unwrap();
    assert_eq!(features.len(), 2);
    let mut total = 0.0;
    for (i, f) in features.iter().enumerate() {
        assert_eq!(f["properties"]["partition_id"].as_u64().unwrap() as usize, i);
        assert_eq!(f["properties"]["weight"].as_f64().unwrap(), 0.5);
        assert_eq!(f["geometry"]["type"], "Polygon");
        total += f["properties"]["area"].as_f64().unwrap();
    }
    assert!((total - 100.0).abs() < 0.5, "areas sum to {total}");

    let stats_text = fs::read_to_string(&stats).unwrap();
    assert!(stats_text.starts_with("run cell_size="));
    assert!(stats_text.contains("tau_met=true"));
    assert_eq!(stats_text.matches("partition id=").count(), 2);

    let svg_text = fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<svg"));
    assert!(svg_text.contains("id=\"partitions\""));
}

#[test]
fn decompose_accepts_geojson_input() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("square.geojson");
    fs::write(
        &input,
        r#"{"type":"Feature","geometry":{"type":"Polygon","coordinates":[[[0,0],[10,0],[10,10],[0,10],[0,0]]]},"properties":{}}"#,
    )
    .unwrap();
    let o = run(&[
        "decompose",
        input.to_str().unwrap(),
        "--weights",
        "0.5,0.5",
        "--opt",
        "pfh",
    ]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn decompose_is_deterministic_for_a_fixed_seed() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_square(dir.path());
    let mut outputs = Vec::new();
    for name in ["a", "b"] {
        let out = dir.path().join(format!("{name}.json"));
        let stats = dir.path().join(format!("{name}.txt"));
        let o = run(&[
            "decompose",
            &input,
            "--weights",
            "0.3,0.7",
            "--opt",
            "pfh",
            "--seed",
            "5",
            "--out",
            out.to_str().unwrap(),
            "--stats",
            stats.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        outputs.push((fs::read(&out).unwrap(), fs::read(&stats).unwrap()));
    }
    assert_eq!(outputs[0].0, outputs[1].0, "GeoJSON outputs differ");
    assert_eq!(outputs[0].1, outputs[1].1, "stats outputs differ");
}

#[test]
fn geojson_output_reparses_to_the_areas_in_the_stats_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_square(dir.path());
    let out = dir.path().join("out.json");
    let stats = dir.path().join("stats.txt");
    let o = run(&[
        "decompose",
        &input,
        "--weights",
        "0.25,0.75",
        "--opt",
        "pfh",
        "--out",
        out.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert!(o.status.success());

    let stats_areas: Vec<f64> = fs::read_to_string(&stats)
        .unwrap()
        .lines()
        .filter(|l| l.starts_with("partition id="))
        .map(|l| {
            l.split_whitespace()
                .find_map(|f| f.strip_prefix("area="))
                .unwrap()
                .parse()
                .unwrap()
        })
        .collect();

    let geojson: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let features = geojson["features"].as_array().unwrap();
    assert_eq!(features.len(), stats_areas.len());
    for (f, &expected) in features.iter().zip(&stats_areas) {
        let ring = f["geometry"]["coordinates"][0].as_array().unwrap();
        let pts: Vec<(f64, f64)> = ring
            .iter()
            .map(|c| (c[0].as_f64().unwrap(), c[1].as_f64().unwrap()))
            .collect();
        let mut twice_area = 0.0;
        for w in pts.windows(2) {
            twice_area += w[0].0 * w[1].1 - w[1].0 * w[0].1;
        }
        let area = 0.5 * twice_area;
        assert!(
            (area - expected).abs() <= 1e-9,
            "shoelace area {area} vs stats area {expected}"
        );
    }
}

#[test]
fn missing_input_exits_one() {
    let o = run(&["decompose", "/nonexistent/input.wkt", "--weights", "0.5,0.5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!o.stderr.is_empty());
}

#[test]
fn unwritable_output_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_square(dir.path());
    let o = run(&[
        "decompose",
        &input,
        "--weights",
        "0.5,0.5",
        "--opt",
        "pfh",
        "--out",
        "/nonexistent-dir/out.json",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_weights_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_square(dir.path());
    let o = run(&["decompose", &input, "--weights", "0.5,0.6"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn self_intersecting_polygon_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bowtie.wkt");
    fs::write(&input, "POLYGON((0 0, 10 10, 10 0, 0 10, 0 0))").unwrap();
    let o = run(&[
        "decompose",
        input.to_str().unwrap(),
        "--weights",
        "0.5,0.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unmet_tolerance_exits_three_but_still_writes_outputs() {
    // A point mass in one corner: the cell holding it carries nearly all
    // the mass, so no assignment can hit a 50/50 split.
    let dir = tempfile::tempdir().unwrap();
    let input = write_square(dir.path());
    let raster = dir.path().join("spike.asc");
    let mut text =
        String::from("ncols 100\nnrows 100\nxllcorner 0\nyllcorner 0\ncellsize 0.1\n");
    for r in 0..100 {
        for c in 0..100 {
            text.push_str(if r == 99 && c == 0 { "1000000 " } else { "1 " });
        }
        text.push('\n');
    }
    fs::write(&raster, text).unwrap();
    let out = dir.path().join("out.json");
    let stats = dir.path().join("stats.txt");
    let o = run(&[
        "decompose",
        &input,
        "--weights",
        "0.5,0.5",
        "--tau",
        "0.3",
        "--opt",
        "pfh",
        "--raster",
        raster.to_str().unwrap(),
        "--skip-simplify",
        "--out",
        out.to_str().unwrap(),
        "--stats",
        stats.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    assert!(out.exists(), "GeoJSON must be written before the tolerance exit");
    let stats_text = fs::read_to_string(&stats).unwrap();
    assert!(stats_text.contains("tau_met=false"));
}

#[test]
fn gen_corpus_is_deterministic_and_valid() {
    let dir = tempfile::tempdir().unwrap();
    let d1 = dir.path().join("c1");
    let d2 = dir.path().join("c2");
    let d3 = dir.path().join("c3");
    for (d, seed) in [(&d1, "9"), (&d2, "9"), (&d3, "10")] {
        let o = run(&[
            "gen-corpus",
            d.to_str().unwrap(),
            "--count",
            "5",
            "--seed",
            seed,
        ]);
        assert!(o.status.success());
    }
    let files: Vec<_> = {
        let mut v: Vec<_> = fs::read_dir(&d1)
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        v.sort();
        v
    };
    assert_eq!(files.len(), 5);
    let mut any_differs = false;
    for name in &files {
        let a = fs::read(d1.join(name)).unwrap();
        let b = fs::read(d2.join(name)).unwrap();
        assert_eq!(a, b, "same seed must reproduce {name:?} byte for byte");
        let text = String::from_utf8(a).unwrap();
        assert!(text.starts_with("POLYGON (("), "unexpected WKT in {name:?}");
        if fs::read(d3.join(name)).unwrap() != b {
            any_differs = true;
        }
    }
    assert!(any_differs, "different seeds must produce a different corpus");
}

#[test]
fn render_layer_flags_control_svg_groups() {
    let dir = tempfile::tempdir().unwrap();
    let input = write_square(dir.path());
    let svg = dir.path().join("r.svg");
    let o = run(&[
        "render",
        &input,
        "--weights",
        "0.5,0.5",
        "--opt",
        "pfh",
        "--grid",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&svg).unwrap();
    assert!(text.contains("id=\"partitions\""));
    assert!(text.contains("id=\"grid\""));
    assert!(text.contains("id=\"outline\""));

    let o = run(&[
        "render",
        &input,
        "--weights",
        "0.5,0.5",
        "--opt",
        "pfh",
        "--no-partitions",
        "--no-outline",
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = fs::read_to_string(&svg).unwrap();
    assert!(!text.contains("id=\"partitions\""));
    assert!(!text.contains("id=\"outline\""));
}

#[test]
fn bench_reports_every_case() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("bench.json");
    let o = run(&[
        "bench",
        "--instances",
        "2",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let cases = report["cases"].as_array().unwrap();
    assert_eq!(cases.len(), 6);
    for c in cases {
        assert!(c["mean_collective_score"].as_f64().unwrap() > 0.0);
    }
}
