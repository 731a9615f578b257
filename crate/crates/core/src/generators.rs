//! Pattern families: snake cross patterns, plain crosses, and randomly
//! decorated labyrinth patterns that keep a given core.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{LabyError, Result};
use crate::grid::{CellAddr, Pattern};
use crate::props::{exit_set, validate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Chirality {
    /// First turn after leaving the centre is to the right.
    #[default]
    Right,
    Left,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SnakeSpec {
    pub k: u32,
    pub chirality: Chirality,
}

impl SnakeSpec {
    pub fn right(k: u32) -> Self {
        Self {
            k,
            chirality: Chirality::Right,
        }
    }

    pub fn left(k: u32) -> Self {
        Self {
            k,
            chirality: Chirality::Left,
        }
    }

    /// `4k + 7`
    pub fn width(&self) -> usize {
        4 * self.k as usize + 7
    }

    /// Central square at `(2k + 3, 2k + 3)`; it is also the exit row and column.
    pub fn center(&self) -> CellAddr {
        let c = 2 * self.k as usize + 3;
        CellAddr::new(c, c)
    }
}

/// Offsets from the central square of the arm that runs to the bottom exit
/// of a right snake, centre excluded, exit included.
///
/// Two steps down; then alternate a horizontal run (west first) with two
/// steps down. A run stops before the cell that would touch the diagonal
/// `|x| == |y|`, or at the neighbour of the exit, which ends the arm.
fn bottom_arm(k: i64) -> Vec<(i64, i64)> {
    let exit_y = -(2 * k + 3);
    let mut cells = vec![(0, -1), (0, -2)];
    let (mut x, mut y) = (0i64, -2i64);
    let mut dx = -1;
    while y > exit_y {
        loop {
            let nx = x + dx;
            if nx.abs() == y.abs() {
                break;
            }
            x = nx;
            cells.push((x, y));
            if (x, y) == (0, exit_y + 1) {
                cells.push((0, exit_y));
                return cells;
            }
        }
        cells.push((x, y - 1));
        cells.push((x, y - 2));
        y -= 2;
        dx = -dx;
    }
    unreachable!("arm walked past the exit row for k = {k}");
}

/// The snake cross pattern `A_k` of width `4k + 7`.
pub fn snake_cross(spec: SnakeSpec) -> Result<Pattern> {
    if spec.k < 1 {
        return Err(LabyError::BadParameter("snake cross needs k >= 1".into()));
    }
    let m = spec.width();
    let c = spec.center().col as i64;
    let arm = bottom_arm(i64::from(spec.k));
    let mut cells = Vec::with_capacity(4 * arm.len() + 1);
    cells.push(spec.center());
    for &(dx, dy) in &arm {
        // the other arms are quarter turns of the bottom one
        for (rx, ry) in [(dx, dy), (-dy, dx), (-dx, -dy), (dy, -dx)] {
            cells.push(CellAddr::new((c + rx) as usize, (c + ry) as usize));
        }
    }
    let right = Pattern::new(m, cells)?;
    Ok(match spec.chirality {
        Chirality::Right => right,
        Chirality::Left => right.mirrored(),
    })
}

/// Cross of width `2k + 1`: row `k` and column `k`.
pub fn plain_cross(k: u32) -> Result<Pattern> {
    if k < 1 {
        return Err(LabyError::BadParameter("plain cross needs k >= 1".into()));
    }
    let k = k as usize;
    Pattern::from_fn(2 * k + 1, |c| c.col == k || c.row == k)
}

/// Grows a labyrinth pattern by whitening black cells that touch exactly one
/// white cell, skipping any that would add an exit pair or break the corner
/// property. Each attempt draws one cell; the core is unchanged.
pub fn decorate(p: &Pattern, seed: u64, attempts: usize) -> Result<Pattern> {
    if !validate(p).is_labyrinth() {
        return Err(LabyError::NotLabyrinth);
    }
    let exits = exit_set(p)?;
    let m = p.width();
    let mut out = p.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let c = CellAddr::new(rng.gen_range(0..m), rng.gen_range(0..m));
        if out.is_white(c) || out.white_neighbors(c).count() != 1 {
            continue;
        }
        let w = |col, row| out.is_white(CellAddr::new(col, row));
        let new_pair = (c.row == m - 1 && w(c.col, 0))
            || (c.row == 0 && w(c.col, m - 1))
            || (c.col == 0 && w(m - 1, c.row))
            || (c.col == m - 1 && w(0, c.row));
        let is_corner = (c.col == 0 || c.col == m - 1) && (c.row == 0 || c.row == m - 1);
        let corner_clash = is_corner && w(m - 1 - c.col, m - 1 - c.row);
        if new_pair || corner_clash {
            continue;
        }
        out.set(c, true);
    }
    debug_assert_eq!(exit_set(&out).ok(), Some(exits));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::read_pattern;
    use crate::paths::exit_path_lengths;
    use crate::props::{check_blocked, core};
    use proptest::prelude::*;

    /// Independent arm recipe from the square counts: horizontal runs of
    /// 1, 4, 8, .., 4(k-1) squares alternating west/east, each followed by two
    /// steps down, then a final run of 2k-1 squares and the exit.
    fn arm_by_run_lengths(k: i64) -> Vec<(i64, i64)> {
        let mut cells = vec![(0, -1), (0, -2)];
        let (mut x, mut y, mut dx) = (0i64, -2i64, -1i64);
        let runs = std::iter::once(1).chain((1..k).map(|i| 4 * i));
        for run in runs {
            for _ in 0..run {
                x += dx;
                cells.push((x, y));
            }
            cells.push((x, y - 1));
            cells.push((x, y - 2));
            y -= 2;
            dx = -dx;
        }
        for _ in 0..2 * k - 1 {
            x += dx;
            cells.push((x, y));
        }
        cells.push((x, y - 1));
        cells
    }

    #[test]
    fn arm_matches_run_length_recipe() {
        for k in 1..=12 {
            assert_eq!(bottom_arm(k), arm_by_run_lengths(k), "k = {k}");
            assert_eq!(bottom_arm(k).len() as i64, 2 * k * k + 2 * k + 3);
        }
    }

    #[test]
    fn snake_family() {
        for k in 1..=6u32 {
            let p = snake_cross(SnakeSpec::right(k)).unwrap();
            let m = 4 * k as usize + 7;
            assert_eq!(p.width(), m);
            let r = validate(&p);
            assert!(r.is_labyrinth(), "k = {k}: {:?}", r.failures);
            let e = r.exits.unwrap();
            assert_eq!((e.exit_col(), e.exit_row()), (2 * k as usize + 3, 2 * k as usize + 3));
            let b = check_blocked(&p).unwrap();
            assert!(b.h_blocked && b.v_blocked);
            assert_eq!((b.h_black, b.v_black), (2 * k as usize, 2 * k as usize));
            assert_eq!(p.rotated_ccw(), p, "four-fold symmetry, k = {k}");
            assert_eq!(p.white_count(), u64::from(8 * k * k + 8 * k + 13));
        }
    }

    #[test]
    fn left_is_mirror_of_right() {
        for k in 1..=5 {
            let r = snake_cross(SnakeSpec::right(k)).unwrap();
            let l = snake_cross(SnakeSpec::left(k)).unwrap();
            assert_eq!(r.mirrored(), l);
            assert_ne!(r, l);
            assert!(validate(&l).is_labyrinth());
        }
    }

    #[test]
    fn snake_k1_layout() {
        let expected = "11\n#####.#####\n#####..####\n######.####\n#####..####\n#...#.#####\n..#.....#..\n#####.#...#\n####..#####\n####.######\n####..#####\n#####.#####\n";
        assert_eq!(
            snake_cross(SnakeSpec::right(1)).unwrap(),
            read_pattern(expected).unwrap()
        );
    }

    #[test]
    fn bad_parameters() {
        assert!(matches!(
            snake_cross(SnakeSpec::right(0)),
            Err(LabyError::BadParameter(_))
        ));
        assert!(matches!(plain_cross(0), Err(LabyError::BadParameter(_))));
    }

    #[test]
    fn plain_crosses() {
        for k in 1..=6 {
            let p = plain_cross(k).unwrap();
            assert_eq!(p.width(), 2 * k as usize + 1);
            assert_eq!(p.white_count(), u64::from(4 * k + 1));
            let r = validate(&p);
            assert!(r.is_labyrinth() && !r.h_blocked && !r.v_blocked);
            assert_eq!(exit_path_lengths(&p).unwrap().common(), Some(2 * k as usize + 1));
        }
        assert_eq!(plain_cross(1).unwrap(), read_pattern("3\n#.#\n...\n#.#\n").unwrap());
    }

    #[test]
    fn decorate_zero_attempts_is_identity() {
        let p = snake_cross(SnakeSpec::right(2)).unwrap();
        assert_eq!(decorate(&p, 7, 0).unwrap(), p);
    }

    #[test]
    fn decorate_grows_and_keeps_core() {
        let a2 = snake_cross(SnakeSpec::right(2)).unwrap();
        let d = decorate(&a2, 11, 400).unwrap();
        assert!(d.white_count() > a2.white_count());
        assert!(a2.is_subset_of(&d));
        assert_eq!(core(&d).unwrap(), a2);
        assert_eq!(decorate(&a2, 11, 400).unwrap(), d, "deterministic per seed");
    }

    #[test]
    fn decorate_rejects_non_labyrinth() {
        let p = Pattern::from_fn(3, |_| true).unwrap();
        assert_eq!(decorate(&p, 1, 10), Err(LabyError::NotLabyrinth));
    }

    proptest! {
        #[test]
        fn decorate_preserves_labyrinth(seed in any::<u64>(), n in 0usize..300, k in 1u32..=3, cross in any::<bool>()) {
            let p = if cross { plain_cross(k).unwrap() } else { snake_cross(SnakeSpec::right(k)).unwrap() };
            let d = decorate(&p, seed, n).unwrap();
            prop_assert!(validate(&d).is_labyrinth());
            prop_assert_eq!(core(&d).unwrap(), core(&p).unwrap());
        }
    }
}
