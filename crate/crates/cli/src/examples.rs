//! Built-in configurations for the classical example flows.

pub const NAMES: [&str; 6] = ["couette", "poiseuille-like", "funstable", "sin-y", "sin-my", "regularization"];

const COUETTE: &str = r#"# Plane Couette flow U = y: U'' vanishes identically.
alpha = 0.1
analyses = ["rayleigh", "fjortoft", "modal-scan"]

[profile]
kind = "from-u"
interval = [-1.0, 1.0]
descriptor = { polynomial = [0.0, 1.0] }

[numerics]
n_modal = 128
k_grid = { min = 0.1, max = 5.0, count = 20 }

[output]
directory = "couette"
"#;

const POISEUILLE: &str = r#"# Poiseuille-like flow U = 1 - y^2.
alpha = 0.1
analyses = ["rayleigh", "fjortoft", "modal-scan", "arnold1", "arnold2"]

[profile]
kind = "from-u"
interval = [-1.0, 1.0]
descriptor = { polynomial = [1.0, 0.0, -1.0] }

[numerics]
n_modal = 128
k_grid = { min = 0.1, max = 5.0, count = 20 }

[output]
directory = "poiseuille-like"
"#;

const FUNSTABLE: &str = r#"# V = y - y^3 on [-1/sqrt(3), 1/sqrt(3)], where V' vanishes at the walls.
alpha = 0.1
analyses = ["rayleigh", "fjortoft", "arnold1"]

[profile]
kind = "from-v"
interval = [-0.5773502691896258, 0.5773502691896258]
descriptor = { polynomial = [0.0, 1.0, 0.0, -1.0] }

[output]
directory = "funstable"
"#;

const SIN_Y: &str = r#"# phi = sin y on the 2 pi torus.
alpha = 0.1
analyses = ["arnold1", "arnold2", "invariants", "torus-evolve"]
seed = 7

[profile]
kind = "torus-phi"
periods = [6.283185307179586, 6.283185307179586]
descriptor = { trig = { amplitude = 1.0, frequency = 1.0, phase = 0.0 } }

[numerics]
n_evolve = 64
horizon = 10.0
epsilon = 0.01

[output]
directory = "sin-y"
"#;

const SIN_MY: &str = r#"# phi = sin 2y on the 2 pi torus.
alpha = 0.1
analyses = ["arnold1", "arnold2", "invariants"]

[profile]
kind = "torus-phi"
periods = [6.283185307179586, 6.283185307179586]
descriptor = { trig = { amplitude = 1.0, frequency = 2.0, phase = 0.0 } }

[numerics]
n_evolve = 64

[output]
directory = "sin-my"
"#;

const REGULARIZATION: &str = r#"# Closed-form regularized steady state on a channel of width pi.
alpha = [0.1, 0.5, 1.0]
analyses = ["arnold1", "arnold2", "linear-evolve"]
seed = 7

[profile]
kind = "regularization"
interval = [-1.5707963267948966, 1.5707963267948966]

[numerics]
n_linear = 96
k_linear = 1.0
horizon = 20.0

[output]
directory = "regularization"
"#;

/// The TOML text of a built-in example.
pub fn example(name: &str) -> Option<&'static str> {
    match name {
        "couette" => Some(COUETTE),
        "poiseuille-like" => Some(POISEUILLE),
        "funstable" => Some(FUNSTABLE),
        "sin-y" => Some(SIN_Y),
        "sin-my" => Some(SIN_MY),
        "regularization" => Some(REGULARIZATION),
        _ => None,
    }
}
