#![allow(dead_code)]

use cflab_core::{Group, GroupSpec};

pub fn f2() -> Group {
    Group::free(2).unwrap()
}

pub fn z2() -> Group {
    Group::abelian(2).unwrap()
}

pub fn z2_star_z3() -> Group {
    Group::free_product(vec![
        GroupSpec::Cyclic { order: 2 },
        GroupSpec::Cyclic { order: 3 },
    ])
    .unwrap()
}

/// (Z2 × Z2) * Z3: virtually free, with a positive four-point estimate.
pub fn klein_star_z3() -> Group {
    Group::free_product(vec![
        GroupSpec::DirectProduct {
            factors: vec![
                GroupSpec::Cyclic { order: 2 },
                GroupSpec::Cyclic { order: 2 },
            ],
        },
        GroupSpec::Cyclic { order: 3 },
    ])
    .unwrap()
}

pub fn providers() -> Vec<(&'static str, Group)> {
    vec![
        ("F2", f2()),
        ("F3", Group::free(3).unwrap()),
        ("Z2", z2()),
        ("Z3", Group::abelian(3).unwrap()),
        ("C5", Group::cyclic(5).unwrap()),
        ("Z2*Z3", z2_star_z3()),
        ("(Z2xZ2)*Z3", klein_star_z3()),
        (
            "F2xC3",
            Group::direct_product(vec![
                GroupSpec::Free { rank: 2 },
                GroupSpec::Cyclic { order: 3 },
            ])
            .unwrap(),
        ),
    ]
}
