//! Checks against hand-transcribed reference patterns.

use std::path::Path;

use laby_core::paths::{exit_path_lengths, tree_path};
use laby_core::props::{check_blocked, exit_set};
use laby_core::{compose, core, read_pattern, snake_cross, validate, CellAddr, Exit, Pattern, SnakeSpec};

fn fixture(name: &str) -> Pattern {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name);
    read_pattern(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn level_two_set_is_the_composition() {
    let (a1, a2) = (fixture("mixed_a4.txt"), fixture("mixed_a5.txt"));
    let w2 = fixture("mixed_w2.txt");
    let composed = compose(&a1, &a2).unwrap();
    // The transcribed level-2 set has one black square shifted: (6,12) where
    // every other copy of the 5-pattern has it at (5,12).
    let corrected = w2
        .with_cell(CellAddr::new(5, 12), false)
        .and_then(|p| p.with_cell(CellAddr::new(6, 12), true))
        .unwrap();
    assert_ne!(composed, w2);
    assert_eq!(composed, corrected);
    assert_eq!(w2.white_count(), a1.white_count() * a2.white_count());
    assert!(validate(&w2).is_labyrinth());
}

#[test]
fn mixed_patterns_are_blocked_labyrinths() {
    for name in ["mixed_a4.txt", "mixed_a5.txt", "mixed_w2.txt", "special_cross_11.txt"] {
        let p = fixture(name);
        assert!(validate(&p).is_labyrinth(), "{name}");
        let b = check_blocked(&p).unwrap();
        assert!(b.h_blocked && b.v_blocked, "{name}");
    }
}

#[test]
fn plain_cross_is_unblocked() {
    let p = fixture("plain_cross_3.txt");
    let b = check_blocked(&p).unwrap();
    assert!(!b.h_blocked && !b.v_blocked);
    assert_eq!(exit_path_lengths(&p).unwrap().common(), Some(3));
}

#[test]
fn decorated_pattern_has_snake_core() {
    let d = fixture("decorated_snake_k2.txt");
    let a2 = snake_cross(SnakeSpec::right(2)).unwrap();
    assert!(validate(&d).is_labyrinth());
    assert!(d.white_count() > a2.white_count());
    assert_eq!(core(&d).unwrap(), a2);
    // the exit paths of the decorated pattern never leave the core
    let e = exit_set(&d).unwrap();
    let path = tree_path(&d, e.get(Exit::Left), e.get(Exit::Bottom)).unwrap();
    assert_eq!(path.len(), 31);
    assert!(path.squares.iter().all(|&c| a2.is_white(c)));
}
