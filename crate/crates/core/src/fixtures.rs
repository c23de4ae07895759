//! Worked instances used across tests, benches and the CLI examples.

use crate::model::{Instance, Mechanism};
use crate::rational::{int, rat, Rational};

fn rows(values: &[[Rational; 2]]) -> Vec<Vec<Rational>> {
    values.iter().map(|r| r.to_vec()).collect()
}

/// Two goods, four types; satisfies the regular-route conditions in no type
/// order even though its pseudo-revenues are single-peaked.
pub fn inst_a() -> Instance {
    Instance::new(
        rows(&[
            [rat(9, 128), rat(27, 64)],
            [rat(1, 4), rat(3, 2)],
            [rat(1, 2), int(2)],
            [int(1), int(1)],
        ]),
        vec![rat(7, 16), rat(3, 16), rat(1, 8), rat(1, 4)],
    )
    .expect("valid fixture")
}

/// Two goods, four types, monotone MRS; item 1 needs ironing at type 2.
pub fn inst_b() -> Instance {
    Instance::new(
        rows(&[
            [rat(57, 64), int(1)],
            [int(1), rat(5, 4)],
            [int(2), int(3)],
            [rat(9, 4), int(5)],
        ]),
        vec![rat(3, 8), rat(1, 4), rat(1, 8), rat(1, 4)],
    )
    .expect("valid fixture")
}

/// Everyone buys good 1 at 57/64; type 4 adds good 2 for another 5.
pub fn inst_b_caption_mechanism() -> Mechanism {
    let one_zero = vec![int(1), int(0)];
    Mechanism {
        q: vec![
            one_zero.clone(),
            one_zero.clone(),
            one_zero,
            vec![int(1), int(1)],
        ],
        t: vec![rat(57, 64), rat(57, 64), rat(57, 64), rat(377, 64)],
    }
}

/// Non-monotone type space where separate prices need not give a chain.
pub fn inst_c() -> Instance {
    Instance::new(
        rows(&[
            [int(1), int(1)],
            [int(1), int(3)],
            [int(3), int(3)],
            [int(4), int(1)],
        ]),
        vec![rat(1, 4); 4],
    )
    .expect("valid fixture")
}

/// Monotone-MRS instance whose candidate ironing intervals partially
/// overlap: `{3,4}` (0-based `{2,3}`) for item 1 and `{2,3}` (0-based
/// `{1,2}`) for item 2. Pseudo-revenues are `(10,6,3,3,4)` and `(4,3,3,5,8)`.
pub fn overlapping_intervals() -> Instance {
    Instance::new(
        rows(&[
            [int(10), int(4)],
            [rat(15, 2), rat(15, 4)],
            [int(5), int(5)],
            [rat(15, 2), rat(25, 2)],
            [int(20), int(40)],
        ]),
        vec![rat(1, 5); 5],
    )
    .expect("valid fixture")
}
