//! Built-in job configurations for the systems the library is tested
//! against. Each preset is an ordinary config document; `ql presets --emit
//! NAME` prints one so it can be saved and edited.

/// `(name, config text, one-line description)` for every built-in system.
pub const PRESETS: &[(&str, &str, &str)] = &[
    (
        "pentagonal-basic",
        "\
field = cyclotomic(5)
beta = 1 + z^1 + z^4
maps = roots_of_unity(5)
window = compact
rho = 30
",
        "golden-ratio inflation with fifth-roots-of-unity translations",
    ),
    (
        "pentagonal-scaled-2",
        "\
field = cyclotomic(5)
beta = 1 + z^1 + z^4
maps = 2*roots_of_unity(5)
window = compact
rho = 30
",
        "the basic system with translations doubled",
    ),
    (
        "pentagonal-negative",
        "\
field = cyclotomic(5)
beta = -(1 + z^1 + z^4)
maps = roots_of_unity(5)
window = compact
rho = 30
",
        "the basic system with a negative inflation factor",
    ),
    (
        "hmv-decagonal",
        "\
field = cyclotomic(5)
beta = (1 + z^1 + z^4)^2
maps = roots_of_unity(10) + {0}
window = compact
rho = 50
",
        "squared inflation with tenth roots of unity and a fixed origin",
    ),
    (
        "hmv-open-window",
        "\
field = cyclotomic(5)
beta = (1 + z^1 + z^4)^2
maps = roots_of_unity(10) + {0}
window = seeds
seeds = {0}
rho = 50
",
        "the decagonal system grown from the origin alone",
    ),
    (
        "coherent-decagonal",
        "\
field = cyclotomic(5)
beta = (1 + z^1 + z^4)^2
maps = roots_of_unity(5) + (z^1 + z^4)*roots_of_unity(5)
window = compact
rho = 30
",
        "ten-map decagonal system with two translation rings",
    ),
    (
        "coherent-decagonal-windowB",
        "\
field = cyclotomic(5)
beta = (1 + z^1 + z^4)^2
maps = roots_of_unity(5) + (z^1 + z^4)*roots_of_unity(5) + {0}
window = seeds
seeds = {0} + (z^1 + z^4)*roots_of_unity(5) + -(z^1 + z^4)^2*roots_of_unity(5)
rho = 30
",
        "eleven-map decagonal system grown from a hand-picked seed set",
    ),
];

/// Look up a preset's config text by name.
pub fn get(name: &str) -> Option<&'static str> {
    PRESETS
        .iter()
        .find(|(n, _, _)| *n == name)
        .map(|(_, text, _)| *text)
}
