//! Scenario parameters, the flat key-value config grammar, and the two
//! bundled presets.
//!
//! The config format is one `key = value` pair per line with `#` comments.
//! Unknown keys are rejected with a list of the offending names; missing
//! keys fall back to the `mimo` preset defaults.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// All scenario parameters for one simulation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Transmitter antennas.
    pub n_t: usize,
    /// Antennas per user.
    pub n_r: usize,
    /// Antennas per eavesdropper.
    pub n_e: usize,
    /// Antennas per relay.
    pub n_i: usize,
    /// Antennas per jamming relay; equals `n_i` for a single pool of relays
    /// but kept distinct so jammer-side dimensions are explicit.
    pub n_k: usize,
    /// Number of users.
    pub m_users: usize,
    /// Number of eavesdroppers.
    pub n_eaves: usize,
    /// Total relay nodes in the pool.
    pub s_total: usize,
    /// Relays selected per function per slot.
    pub s_select: usize,
    /// Jamming relays per slot.
    pub k_jammers: usize,
    /// Packets each relay buffer can hold.
    pub buffer_len: usize,
    /// Total transmit power (linear, relative to unit noise).
    pub power: f64,
    /// Power-split parameter: source gets `eta * P`, relays `(2 - eta) * P`.
    pub eta: f64,
    /// Interference-cancellation feasibility threshold.
    pub gamma0: f64,
    /// Maximum consecutive slots a link may stay inactive.
    pub eta_l_max: usize,
    /// Transmit-side antenna correlation coefficient, |r| <= 1.
    pub corr_r: Complex64,
    /// SNR sweep grid in dB.
    pub snr_grid_db: Vec<f64>,
    /// Monte Carlo trials per sweep point.
    pub trials: usize,
    /// Master seed.
    pub seed: u64,
    /// Slots simulated per trial.
    pub slots: usize,
    /// Leading slots excluded from averages while buffers fill in.
    pub warmup_slots: usize,
    /// Apply inter-relay interference cancellation when feasible.
    pub use_ic: bool,
    /// Draw transmit-correlated channels.
    pub correlated: bool,
    /// Grid for the power-split sweep.
    pub eta_grid: Vec<f64>,
    /// Grid for the buffer-size sweep.
    pub l_grid: Vec<usize>,
}

impl Default for SystemConfig {
    fn default() -> Self {
        Self::mimo_preset()
    }
}

impl SystemConfig {
    /// MIMO scenario: 6 transmit antennas, 2 antennas per user, relay and
    /// eavesdropper, buffers of 4 packets.
    pub fn mimo_preset() -> Self {
        Self {
            n_t: 6,
            n_r: 2,
            n_e: 2,
            n_i: 2,
            n_k: 2,
            m_users: 3,
            n_eaves: 3,
            s_total: 6,
            s_select: 3,
            k_jammers: 3,
            buffer_len: 4,
            power: 10.0,
            eta: 1.0,
            gamma0: 0.05,
            eta_l_max: 5,
            corr_r: Complex64::new(0.0, 0.0),
            snr_grid_db: vec![0.0, 5.0, 10.0, 15.0, 20.0],
            trials: 100,
            seed: 1,
            slots: 200,
            warmup_slots: 20,
            use_ic: true,
            correlated: false,
            eta_grid: vec![0.5, 1.0, 1.5, 2.0],
            l_grid: vec![1, 2, 4, 8, 10],
        }
    }

    /// Single-antenna scenario: 3 transmit antennas broadcasting to 3
    /// single-antenna users through single-antenna relays.
    pub fn siso_preset() -> Self {
        Self {
            n_t: 3,
            n_r: 1,
            n_e: 1,
            n_i: 1,
            n_k: 1,
            m_users: 3,
            n_eaves: 3,
            s_total: 6,
            s_select: 3,
            k_jammers: 3,
            buffer_len: 4,
            ..Self::mimo_preset()
        }
    }

    /// Checks every structural invariant, returning the violated constraint.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.n_t < self.n_r * self.m_users {
            return fail(format!(
                "n_t >= n_r * m_users violated: {} < {} * {}",
                self.n_t, self.n_r, self.m_users
            ));
        }
        if self.n_i * self.s_select < self.n_r * self.m_users {
            return fail(format!(
                "n_i * s_select >= n_r * m_users violated: {} * {} < {} * {}",
                self.n_i, self.s_select, self.n_r, self.m_users
            ));
        }
        if self.n_k * self.k_jammers < self.n_r * self.m_users {
            return fail(format!(
                "n_k * k_jammers >= n_r * m_users violated: {} * {} < {} * {}",
                self.n_k, self.k_jammers, self.n_r, self.m_users
            ));
        }
        if self.n_e * self.n_eaves < self.n_r * self.m_users {
            return fail(format!(
                "n_e * n_eaves >= n_r * m_users violated: {} * {} < {} * {}",
                self.n_e, self.n_eaves, self.n_r, self.m_users
            ));
        }
        if self.s_select > self.s_total {
            return fail(format!(
                "s_select <= s_total violated: {} > {}",
                self.s_select, self.s_total
            ));
        }
        if !(0.0..=2.0).contains(&self.eta) {
            return fail(format!("0 <= eta <= 2 violated: {}", self.eta));
        }
        if self.corr_r.norm() > 1.0 {
            return fail(format!("|corr_r| <= 1 violated: {}", self.corr_r.norm()));
        }
        if self.buffer_len < 1 {
            return fail("buffer_len >= 1 violated: 0".to_string());
        }
        if self.gamma0 <= 0.0 {
            return fail(format!("gamma0 > 0 violated: {}", self.gamma0));
        }
        if self.eta_l_max < 1 {
            return fail("eta_l_max >= 1 violated: 0".to_string());
        }
        for eta in &self.eta_grid {
            if !(0.0..=2.0).contains(eta) {
                return fail(format!("eta_grid entries must lie in [0, 2], got {eta}"));
            }
        }
        for l in &self.l_grid {
            if *l < 1 {
                return fail("l_grid entries must be >= 1".to_string());
            }
        }
        if self.slots == 0 {
            return fail("slots >= 1 violated: 0".to_string());
        }
        if self.warmup_slots >= self.slots {
            return fail(format!(
                "warmup_slots < slots violated: {} >= {}",
                self.warmup_slots, self.slots
            ));
        }
        Ok(())
    }

    /// Extra constraints the slot pipeline needs beyond the structural ones:
    /// the per-destination precoder blocks must tile the user streams, and
    /// zero forcing needs at least as many transmit antennas as stacked
    /// relay receive antennas.
    pub fn validate_for_simulation(&self) -> Result<()> {
        self.validate()?;
        if self.s_select != self.m_users {
            return Err(Error::Config(format!(
                "s_select == m_users required by the stream-to-relay pairing: {} != {}",
                self.s_select, self.m_users
            )));
        }
        if self.s_select * self.n_i > self.n_t {
            return Err(Error::Config(format!(
                "s_select * n_i <= n_t required for zero forcing: {} * {} > {}",
                self.s_select, self.n_i, self.n_t
            )));
        }
        Ok(())
    }

    /// Parses the flat key-value grammar on top of the mimo preset defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::mimo_preset();
        let mut unknown: Vec<String> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`, got `{raw}`", lineno + 1))
            })?;
            let key = key.trim();
            let value = value.trim();
            let parsed = cfg.apply_key(key, value, lineno + 1)?;
            if !parsed {
                unknown.push(key.to_string());
            }
        }
        if !unknown.is_empty() {
            return Err(Error::Config(format!(
                "unknown config keys: {}",
                unknown.join(", ")
            )));
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply_key(&mut self, key: &str, value: &str, line: usize) -> Result<bool> {
        fn num<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
            value.parse::<T>().map_err(|_| {
                Error::Config(format!("line {line}: invalid value `{value}` for `{key}`"))
            })
        }
        match key {
            "preset" => match value {
                "mimo" => *self = Self::mimo_preset(),
                "siso" => *self = Self::siso_preset(),
                other => {
                    return Err(Error::Config(format!(
                        "line {line}: unknown preset `{other}` (expected mimo or siso)"
                    )))
                }
            },
            "n_t" => self.n_t = num(key, value, line)?,
            "n_r" => self.n_r = num(key, value, line)?,
            "n_e" => self.n_e = num(key, value, line)?,
            "n_i" => self.n_i = num(key, value, line)?,
            "n_k" => self.n_k = num(key, value, line)?,
            "m_users" => self.m_users = num(key, value, line)?,
            "n_eaves" => self.n_eaves = num(key, value, line)?,
            "s_total" => self.s_total = num(key, value, line)?,
            "s_select" => self.s_select = num(key, value, line)?,
            "k_jammers" => self.k_jammers = num(key, value, line)?,
            "buffer_len" => self.buffer_len = num(key, value, line)?,
            "power" => self.power = num(key, value, line)?,
            "eta" => self.eta = num(key, value, line)?,
            "gamma0" => self.gamma0 = num(key, value, line)?,
            "eta_l_max" => self.eta_l_max = num(key, value, line)?,
            "corr_r" => self.corr_r = parse_complex(value, line)?,
            "snr_grid_db" => self.snr_grid_db = parse_list::<f64>(key, value, line)?,
            "trials" => self.trials = num(key, value, line)?,
            "seed" => self.seed = num(key, value, line)?,
            "slots" => self.slots = num(key, value, line)?,
            "warmup_slots" => self.warmup_slots = num(key, value, line)?,
            "use_ic" => self.use_ic = parse_bool(key, value, line)?,
            "correlated" => self.correlated = parse_bool(key, value, line)?,
            "eta_grid" => self.eta_grid = parse_list::<f64>(key, value, line)?,
            "l_grid" => self.l_grid = parse_list::<usize>(key, value, line)?,
            _ => return Ok(false),
        }
        Ok(true)
    }

    /// Serializes to the same grammar `parse` accepts.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        kv("n_t", self.n_t.to_string());
        kv("n_r", self.n_r.to_string());
        kv("n_e", self.n_e.to_string());
        kv("n_i", self.n_i.to_string());
        kv("n_k", self.n_k.to_string());
        kv("m_users", self.m_users.to_string());
        kv("n_eaves", self.n_eaves.to_string());
        kv("s_total", self.s_total.to_string());
        kv("s_select", self.s_select.to_string());
        kv("k_jammers", self.k_jammers.to_string());
        kv("buffer_len", self.buffer_len.to_string());
        kv("power", format!("{:?}", self.power));
        kv("eta", format!("{:?}", self.eta));
        kv("gamma0", format!("{:?}", self.gamma0));
        kv("eta_l_max", self.eta_l_max.to_string());
        kv("corr_r", format_complex(self.corr_r));
        kv(
            "snr_grid_db",
            self.snr_grid_db
                .iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join(","),
        );
        kv("trials", self.trials.to_string());
        kv("seed", self.seed.to_string());
        kv("slots", self.slots.to_string());
        kv("warmup_slots", self.warmup_slots.to_string());
        kv("use_ic", self.use_ic.to_string());
        kv("correlated", self.correlated.to_string());
        kv(
            "eta_grid",
            self.eta_grid
                .iter()
                .map(|v| format!("{v:?}"))
                .collect::<Vec<_>>()
                .join(","),
        );
        kv(
            "l_grid",
            self.l_grid
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        out
    }

    /// Linear power for an SNR point under unit noise.
    pub fn power_for_snr_db(snr_db: f64) -> f64 {
        10f64.powf(snr_db / 10.0)
    }
}

fn parse_bool(key: &str, value: &str, line: usize) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(Error::Config(format!(
            "line {line}: invalid boolean `{value}` for `{key}`"
        ))),
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|tok| {
            tok.trim().parse::<T>().map_err(|_| {
                Error::Config(format!(
                    "line {line}: invalid list element `{}` for `{key}`",
                    tok.trim()
                ))
            })
        })
        .collect()
}

/// Accepts `a`, `a+bi` or `a-bi`.
fn parse_complex(value: &str, line: usize) -> Result<Complex64> {
    let v = value.trim();
    let bad = || Error::Config(format!("line {line}: invalid complex value `{value}`"));
    if let Some(stripped) = v.strip_suffix('i') {
        // find the sign separating real and imaginary parts, skipping a
        // leading sign on the real part
        let body = stripped;
        let mut split = None;
        for (idx, ch) in body.char_indices().skip(1) {
            if (ch == '+' || ch == '-') && !matches!(&body[idx - 1..idx], "e" | "E") {
                split = Some(idx);
            }
        }
        let idx = split.ok_or_else(bad)?;
        let re: f64 = body[..idx].trim().parse().map_err(|_| bad())?;
        let im_str = body[idx..].trim();
        let im: f64 = if im_str == "+" {
            1.0
        } else if im_str == "-" {
            -1.0
        } else {
            im_str.parse().map_err(|_| bad())?
        };
        Ok(Complex64::new(re, im))
    } else {
        let re: f64 = v.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:?}", z.re)
    } else if z.im >= 0.0 {
        format!("{:?}+{:?}i", z.re, z.im)
    } else {
        format!("{:?}{:?}i", z.re, z.im)
    }
}
