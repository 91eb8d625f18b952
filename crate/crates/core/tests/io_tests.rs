//! File-level round-trips through temporary directories, plus the error
//! paths of the JSON loaders.

use std::collections::BTreeMap;

use dpsem::bayes::BeliefPrior;
use dpsem::io;
use dpsem::mechanism::{
    make_local_sensitivity_laplace, make_noisy_sum, make_randomized_response, Database,
    DatabaseSpace, Mechanism, NoiseSpec, QueryKind, QueryTable, ENUMERATION_CAP,
};
use dpsem::Error;

fn assert_rows_bit_equal(a: &Mechanism, b: &Mechanism) {
    let space = a.space();
    assert_eq!(a.transcripts(), b.transcripts());
    for db in space.enumerate(ENUMERATION_CAP).unwrap() {
        assert_eq!(
            a.row(&db).unwrap().probs,
            b.row(&db).unwrap().probs,
            "row mismatch at {}",
            space.database_string(&db)
        );
    }
}

#[test]
fn dense_mechanism_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dense.json");
    let space = DatabaseSpace::new(vec!["a".into(), "b".into(), "c".into()], 2, "a").unwrap();
    let dbs = space.enumerate(16).unwrap();
    let rows: BTreeMap<Database, Vec<f64>> = dbs
        .iter()
        .enumerate()
        .map(|(i, db)| {
            let w = 1.0 + i as f64;
            (
                db.clone(),
                vec![w / (w + 2.0), 1.0 / (w + 2.0), 1.0 / (w + 2.0)],
            )
        })
        .collect();
    let m = Mechanism::new_dense(space, vec!["x".into(), "y".into(), "z".into()], rows).unwrap();
    io::save_mechanism(&m, &path).unwrap();
    let back = io::load_mechanism(&path).unwrap();
    assert!(back.is_dense());
    assert_rows_bit_equal(&m, &back);
}

#[test]
fn every_generator_kind_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let space = DatabaseSpace::binary(3).unwrap();
    let d5 = DatabaseSpace::new((0..5).map(|i| i.to_string()).collect(), 3, "0").unwrap();
    let mechanisms: Vec<(&str, Mechanism)> = vec![
        ("rr", make_randomized_response(&space, 0.25).unwrap()),
        (
            "lap",
            make_noisy_sum(&space, NoiseSpec::laplace(2.0).unwrap()).unwrap(),
        ),
        (
            "gau",
            make_noisy_sum(&space, NoiseSpec::gaussian(3.0).unwrap()).unwrap(),
        ),
        (
            "lsl",
            make_local_sensitivity_laplace(
                QueryTable::Builtin(QueryKind::Median),
                &d5,
                1.0,
                0.5,
                None,
                None,
            )
            .unwrap(),
        ),
    ];
    for (name, m) in mechanisms {
        let path = dir.path().join(format!("{name}.json"));
        io::save_mechanism(&m, &path).unwrap();
        let back = io::load_mechanism(&path).unwrap();
        assert!(!back.is_dense(), "{name} must stay generator-backed");
        assert_rows_bit_equal(&m, &back);
    }
}

#[test]
fn table_query_cannot_be_saved_as_descriptor() {
    let space = DatabaseSpace::binary(1).unwrap();
    let table: BTreeMap<Database, f64> = space
        .enumerate(4)
        .unwrap()
        .into_iter()
        .enumerate()
        .map(|(i, db)| (db, i as f64))
        .collect();
    let m = make_local_sensitivity_laplace(QueryTable::Table(table), &space, 1.0, 0.5, None, None)
        .unwrap();
    assert!(matches!(
        io::mechanism_to_json(&m),
        Err(Error::Capability(_))
    ));
}

#[test]
fn prior_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("prior.json");
    let space = DatabaseSpace::binary(3).unwrap();
    let prior = BeliefPrior::new(
        space.clone(),
        vec![
            (space.parse_database("0,0,0").unwrap(), 0.1),
            (space.parse_database("1,0,1").unwrap(), 1.0 / 3.0),
            (space.parse_database("1,1,1").unwrap(), 0.2),
        ],
    )
    .unwrap();
    io::save_prior(&prior, &path).unwrap();
    let back = io::load_prior(&space, &path).unwrap();
    assert_eq!(back.support(), prior.support());
    assert_eq!(back.weights().probs(), prior.weights().probs());
}

#[test]
fn malformed_json_is_an_input_class_error() {
    let err = io::mechanism_from_json("{ not json").unwrap_err();
    assert!(matches!(err, Error::Json(_)));
    let err = io::prior_from_json(
        &DatabaseSpace::binary(1).unwrap(),
        "[{\"database\": \"0\"}]",
    )
    .unwrap_err();
    assert!(matches!(err, Error::Json(_)));
}

#[test]
fn bad_probability_string_is_rejected() {
    let space = DatabaseSpace::binary(1).unwrap();
    let m = make_randomized_response(&space, 0.25)
        .unwrap()
        .densify(ENUMERATION_CAP)
        .unwrap();
    let text = io::mechanism_to_json(&m).unwrap();
    let broken = text.replacen("e-1", "e-1x", 1);
    assert!(matches!(
        io::mechanism_from_json(&broken),
        Err(Error::Input(_))
    ));
}

#[test]
fn unknown_generator_type_is_rejected() {
    let text = r#"{
        "domain": ["0", "1"],
        "n": 2,
        "default": "0",
        "transcripts": ["a"],
        "generator": { "type": "exponential_sum", "scale": 1.0 }
    }"#;
    assert!(matches!(io::mechanism_from_json(text), Err(Error::Json(_))));
}

#[test]
fn unknown_db_in_prior_is_rejected() {
    let space = DatabaseSpace::binary(2).unwrap();
    let err =
        io::prior_from_json(&space, "[{\"database\": \"0,7\", \"weight\": \"1.0\"}]").unwrap_err();
    assert!(matches!(err, Error::Input(_)));
}

#[test]
fn semantic_csv_skipped_games_leave_empty_cells() {
    // a mechanism whose game-1 view cannot produce transcript "u" from the
    // prior support: the sd cell must be empty rather than fabricated
    let space = DatabaseSpace::binary(1).unwrap();
    let mut rows: BTreeMap<Database, Vec<f64>> = BTreeMap::new();
    rows.insert(space.parse_database("0").unwrap(), vec![1.0, 0.0]);
    rows.insert(space.parse_database("1").unwrap(), vec![0.0, 1.0]);
    let m = Mechanism::new_dense(space.clone(), vec!["d".into(), "u".into()], rows).unwrap();
    let prior = BeliefPrior::uniform(space.clone(), space.enumerate(4).unwrap()).unwrap();
    let report = dpsem::bayes::semantic_report(&m, &prior).unwrap();
    let mut buf = Vec::new();
    io::write_semantic_csv(&mut buf, &report).unwrap();
    let text = String::from_utf8(buf).unwrap();
    // transcript "u" in game 1 (everything defaults to db 0) has zero
    // marginal: the row exists, its sd cell is empty
    let u_row = text
        .lines()
        .find(|l| l.starts_with("u,1,"))
        .expect("row for transcript u, game 1");
    assert!(u_row.starts_with("u,1,,"), "row was: {u_row}");
}

#[test]
fn a2_csv_has_contracted_header() {
    let cfg = dpsem::bayes::A2Config::new(2, 0.5, (2.0f64).powi(-20));
    let report = dpsem::bayes::counterexample_a2(&cfg).unwrap();
    let mut buf = Vec::new();
    io::write_a2_csv(&mut buf, &report).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("transcript,ratio,posterior_x0,sd_game1\n"));
    assert_eq!(text.lines().count(), report.rows.len() + 1);
}
