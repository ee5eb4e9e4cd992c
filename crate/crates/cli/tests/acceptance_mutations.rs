use navier_mild_cli::acceptance::{acceptance_suite, run_criterion, Level, Mutation};

fn verdict(id: u32, mutation: Mutation) -> bool {
    let r = run_criterion(id, Level::Quick, mutation).unwrap();
    println!("{r}");
    r.passed
}

#[test]
fn flipped_projector_fails_the_projector_suite() {
    let mutation = Mutation {
        flip_leray_sign: true,
        ..Mutation::default()
    };
    assert!(!verdict(2, mutation));
}

#[test]
fn skipped_dealiasing_is_caught_by_random_data_only() {
    let mutation = Mutation {
        skip_dealiasing: true,
        ..Mutation::default()
    };
    assert!(verdict(1, mutation), "Taylor-Green nonlinearity is a pure gradient");
    assert!(!verdict(13, mutation));
}

#[test]
fn unknown_criteria_are_absent() {
    assert!(run_criterion(99, Level::Quick, Mutation::default()).is_none());
    assert!(acceptance_suite(Level::Quick, Mutation::default(), &[99], |_| {}).is_empty());
}

#[test]
#[ignore = "full scale takes several minutes"]
fn full_level_passes() {
    let results = acceptance_suite(Level::Full, Mutation::default(), &[], |r| println!("{r}"));
    assert!(results.iter().all(|r| r.passed));
}
