//! Small hand-checked profiles used in documentation, tests and the CLI demo.

use crate::model::Profile;

/// Four alternatives `x, y, z, t` (indices 0..4), eleven voters.
pub fn fixture_a() -> Profile {
    Profile::from_labeled(
        &["x", "y", "z", "t"],
        &[
            ("z>t>x>y", 5),
            ("y>t>x>z", 2),
            ("x>y>t>z", 2),
            ("t>x>y>z", 2),
        ],
    )
    .expect("fixture A is well formed")
}

/// Six alternatives `x, y, z, t, u, v`, twenty voters, two 3-wise medians.
pub fn fixture_b() -> Profile {
    Profile::from_labeled(
        &["x", "y", "z", "t", "u", "v"],
        &[
            ("x>y>z>t>u>v", 5),
            ("u>y>z>x>t>v", 5),
            ("v>z>y>x>t>u", 5),
            ("t>u>x>v>y>z", 5),
        ],
    )
    .expect("fixture B is well formed")
}

/// Six alternatives `c1..c6`, ten voters, one 3-wise median.
pub fn fixture_c() -> Profile {
    Profile::from_labeled(
        &["c1", "c2", "c3", "c4", "c5", "c6"],
        &[
            ("c1>c2>c4>c3>c5>c6", 4),
            ("c1>c3>c2>c4>c5>c6", 4),
            ("c6>c1>c2>c4>c3>c5", 1),
            ("c6>c1>c4>c3>c2>c5", 1),
        ],
    )
    .expect("fixture C is well formed")
}
