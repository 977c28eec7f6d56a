use std::f64::consts::{PI, TAU};
use std::path::Path;

use parastab_cli::{parse_config, to_config_text, ConfigError, ExperimentKind, OutputFormat};

const STABILIZE: &str = "\
[experiment]
kind = stabilize

[system]
omega_q = 4.343 GHz
omega_r = 5.439 GHz
chi = -0.2 MHz
kappa = 1.6 MHz
gamma = 7.6 kHz
gamma_phi = 3 kHz
n_fock = 5

[drive]
omega_x = 9 MHz
omega_b = 0.5 MHz

[grid.theta]
start = 0 deg
stop = 180 deg
count = 17
";

#[test]
fn minimal_stabilize_config() {
    let c = parse_config(STABILIZE).unwrap();
    assert_eq!(c.kind, ExperimentKind::Stabilize);
    assert_eq!(c.format, OutputFormat::Csv);
    assert_eq!(c.output, "stabilize");
    let s = c.system.unwrap();
    assert!((s.omega_q - TAU * 4.343e9).abs() < 1e-3);
    assert!((s.gamma - TAU * 7.6e3).abs() < 1e-9);
    assert_eq!(s.chi_prime, s.chi);
    let d = c.drive.unwrap();
    assert!((d.omega_x - TAU * 9e6).abs() < 1e-6);
    assert_eq!(d.omega_z, 0.0);
    let g = c.grid("theta").unwrap();
    assert_eq!(g.count, 17);
    assert!((g.stop - PI).abs() < 1e-15);
}

#[test]
fn canonical_text_round_trips() {
    let c = parse_config(STABILIZE).unwrap();
    let text = to_config_text(&c);
    let again = parse_config(&text).unwrap();
    assert_eq!(c, again);
    assert_eq!(text, to_config_text(&again));
}

#[test]
fn every_example_round_trips() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut n = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let c = parse_config(&std::fs::read_to_string(&path).unwrap()).unwrap_or_else(|e| panic!("{path:?}: {e}"));
        assert_eq!(parse_config(&to_config_text(&c)).unwrap(), c, "{path:?}");
        n += 1;
    }
    assert_eq!(n, ExperimentKind::ALL.len());
}

#[test]
fn units_and_inline_forms() {
    let text = STABILIZE
        .replace("omega_x = 9 MHz", "omega_x = 9000kHz  # attached unit")
        .replace("kappa = 1.6 MHz", "kappa = 1.0053096491487338e7 rad/s");
    let c = parse_config(&text).unwrap();
    assert!((c.drive.unwrap().omega_x - TAU * 9e6).abs() < 1e-6);
    assert!((c.system.unwrap().kappa - TAU * 1.6e6).abs() < 1e-6);
}

#[test]
fn empty_text_names_the_first_required_section() {
    assert_eq!(
        parse_config("").unwrap_err(),
        ConfigError::MissingSection {
            name: "experiment".into()
        }
    );
    assert!(matches!(parse_config("# only a comment\n"), Err(ConfigError::MissingSection { .. })));
}

#[test]
fn unknown_key_reports_its_line() {
    let text = STABILIZE.replace("omega_b = 0.5 MHz", "omega_bb = 0.5 MHz");
    match parse_config(&text).unwrap_err() {
        ConfigError::UnknownKey { line, section, key } => {
            assert_eq!((line, section.as_str(), key.as_str()), (15, "drive", "omega_bb"));
        }
        e => panic!("{e:?}"),
    }
}

#[test]
fn missing_unit_and_wrong_unit() {
    let e = parse_config(&STABILIZE.replace("kappa = 1.6 MHz", "kappa = 1.6")).unwrap_err();
    assert!(matches!(e, ConfigError::BadUnit { line: 8, ref unit, .. } if unit.is_empty()), "{e:?}");
    let e = parse_config(&STABILIZE.replace("stop = 180 deg", "stop = 180 MHz")).unwrap_err();
    assert!(matches!(e, ConfigError::BadUnit { line: 19, ref unit, .. } if unit == "MHz"), "{e:?}");
    assert!(e.to_string().contains("rad, deg"));
}

#[test]
fn duplicate_key_reports_both_lines() {
    let text = STABILIZE.replace("n_fock = 5", "n_fock = 5\nkappa = 2 MHz");
    assert_eq!(
        parse_config(&text).unwrap_err(),
        ConfigError::DuplicateKey {
            key: "kappa".into(),
            first: 8,
            second: 12
        }
    );
}

#[test]
fn missing_pieces() {
    let e = parse_config(&STABILIZE.replace("[grid.theta]", "[solver]").replace("start = 0 deg\nstop = 180 deg\ncount = 17\n", ""))
        .unwrap_err();
    assert!(matches!(e, ConfigError::MissingSection { ref name } if name == "grid.theta"), "{e:?}");
    let e = parse_config(&STABILIZE.replace("gamma = 7.6 kHz\n", "")).unwrap_err();
    assert!(matches!(e, ConfigError::MissingKey { line: 4, ref key, .. } if key == "gamma"), "{e:?}");
}

#[test]
fn value_validation() {
    let bad = |from: &str, to: &str| parse_config(&STABILIZE.replace(from, to)).unwrap_err();
    assert!(matches!(bad("count = 17", "count = 0"), ConfigError::BadValue { line: 20, .. }));
    assert!(matches!(bad("count = 17", "count = 2.5"), ConfigError::BadValue { .. }));
    assert!(matches!(bad("kappa = 1.6 MHz", "kappa = -1.6 MHz"), ConfigError::BadValue { .. }));
    assert!(matches!(bad("kappa = 1.6 MHz", "kappa = x MHz"), ConfigError::BadValue { .. }));
    assert!(matches!(bad("n_fock = 5", "n_fock = 1"), ConfigError::BadValue { .. }));
    assert!(matches!(bad("kind = stabilize", "kind = teleport"), ConfigError::BadValue { line: 2, .. }));
    let e = bad("kind = stabilize", "kind = stabilize\nformat = xml");
    assert!(matches!(e, ConfigError::BadValue { .. }));
    let e = bad("kind = stabilize", "kind = stabilize\n[solver]\nrtol = 0");
    assert!(matches!(e, ConfigError::UnusedSection { .. } | ConfigError::BadValue { .. }), "{e:?}");
}

#[test]
fn solver_tolerances_must_be_positive() {
    let base = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/vacuum_rabi.cfg")).unwrap();
    let e = parse_config(&base.replace("rtol = 1e-10", "rtol = -1e-10")).unwrap_err();
    assert!(matches!(e, ConfigError::BadValue { ref key, .. } if key == "rtol"), "{e:?}");
}

#[test]
fn structure_errors() {
    assert!(matches!(parse_config("kind = stabilize\n"), Err(ConfigError::Syntax { line: 1, .. })));
    assert!(matches!(parse_config("[experiment\n"), Err(ConfigError::Syntax { line: 1, .. })));
    assert!(matches!(parse_config("[nonsense]\n"), Err(ConfigError::UnknownSection { line: 1, .. })));
    assert!(matches!(parse_config("[experiment]\nkind\n"), Err(ConfigError::Syntax { line: 2, .. })));
    let twice = format!("{STABILIZE}\n[drive]\nomega_x = 1 MHz\n");
    assert!(matches!(
        parse_config(&twice),
        Err(ConfigError::DuplicateSection { first: 13, second: 22, .. })
    ));
    let extra = format!("{STABILIZE}\n[circuit]\nl_q = 1 nH\n");
    assert!(matches!(parse_config(&extra), Err(ConfigError::UnusedSection { .. })));
}

#[test]
fn compare_interactions() {
    let text = STABILIZE.replace("kind = stabilize", "kind = compare\ninteractions = purple, blue");
    let c = parse_config(&text).unwrap();
    assert_eq!(c.interactions.len(), 2);
    assert_eq!(parse_config(&to_config_text(&c)).unwrap(), c);
    let e = parse_config(&STABILIZE.replace("kind = stabilize", "kind = compare\ninteractions = blue, blue")).unwrap_err();
    assert!(matches!(e, ConfigError::BadValue { .. }));
    let e = parse_config(&STABILIZE.replace("kind = stabilize", "kind = stabilize\ninteractions = blue")).unwrap_err();
    assert!(matches!(e, ConfigError::BadValue { .. }));
}
