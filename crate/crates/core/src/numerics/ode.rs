//! Explicit Dormand–Prince 8(5,3) integrator with PI step control.
//!
//! The driver is step-oriented: callers own the loop so that they can stop on
//! events (perihelion, exit radius) and refine them with [`Dop853::trial_step`].

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step budget of {max_steps} exhausted at t = {t}")]
    StepBudget { t: f64, max_steps: usize },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
}

/// Right-hand side `dy = f(t, y)`.
pub trait OdeSystem {
    fn dim(&self) -> usize;
    fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]);
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

/// Mutable integration state carried between steps.
#[derive(Debug, Clone)]
pub struct OdeState {
    pub t: f64,
    pub y: Vec<f64>,
    /// Derivative at `(t, y)` (first-same-as-last).
    pub dy: Vec<f64>,
    pub h: f64,
    facold: f64,
    pub stats: StepStats,
}

#[derive(Debug, Clone)]
pub struct Dop853 {
    pub rtol: f64,
    /// Absolute tolerance per component; a single entry is broadcast.
    pub atol: Vec<f64>,
    pub max_steps: usize,
    pub h_max: f64,
    safety: f64,
    beta: f64,
    fac_min: f64,
    fac_max: f64,
}

const C: [f64; 12] = [
    0.0,
    0.526001519587677318785587544488E-01,
    0.789002279381515978178381316732E-01,
    0.118350341907227396726757197510E+00,
    0.281649658092772603273242802490E+00,
    0.333333333333333333333333333333E+00,
    0.25E+00,
    0.307692307692307692307692307692E+00,
    0.651282051282051282051282051282E+00,
    0.6E+00,
    0.857142857142857142857142857142E+00,
    1.0,
];

const A: [&[f64]; 12] = [
    &[],
    &[5.26001519587677318785587544488E-2],
    &[
        1.97250569845378994544595329183E-2,
        5.91751709536136983633785987549E-2,
    ],
    &[
        2.95875854768068491816892993775E-2,
        0.0,
        8.87627564304205475450678981324E-2,
    ],
    &[
        2.41365134159266685502369798665E-1,
        0.0,
        -8.84549479328286085344864962717E-1,
        9.24834003261792003115737966543E-1,
    ],
    &[
        3.7037037037037037037037037037E-2,
        0.0,
        0.0,
        1.70828608729473871279604482173E-1,
        1.25467687566822425016691814123E-1,
    ],
    &[
        3.7109375E-2,
        0.0,
        0.0,
        1.70252211019544039314978060272E-1,
        6.02165389804559606850219397283E-2,
        -1.7578125E-2,
    ],
    &[
        3.70920001185047927108779319836E-2,
        0.0,
        0.0,
        1.70383925712239993810214054705E-1,
        1.07262030446373284651809199168E-1,
        -1.53194377486244017527936158236E-2,
        8.27378916381402288758473766002E-3,
    ],
    &[
        6.24110958716075717114429577812E-1,
        0.0,
        0.0,
        -3.36089262944694129406857109825E0,
        -8.68219346841726006818189891453E-1,
        2.75920996994467083049415600797E1,
        2.01540675504778934086186788979E1,
        -4.34898841810699588477366255144E1,
    ],
    &[
        4.77662536438264365890433908527E-1,
        0.0,
        0.0,
        -2.48811461997166764192642586468E0,
        -5.90290826836842996371446475743E-1,
        2.12300514481811942347288949897E1,
        1.52792336328824235832596922938E1,
        -3.32882109689848629194453265587E1,
        -2.03312017085086261358222928593E-2,
    ],
    &[
        -9.3714243008598732571704021658E-1,
        0.0,
        0.0,
        5.18637242884406370830023853209E0,
        1.09143734899672957818500254654E0,
        -8.14978701074692612513997267357E0,
        -1.85200656599969598641566180701E1,
        2.27394870993505042818970056734E1,
        2.49360555267965238987089396762E0,
        -3.0467644718982195003823669022E0,
    ],
    &[
        2.27331014751653820792359768449E0,
        0.0,
        0.0,
        -1.05344954667372501984066689879E1,
        -2.00087205822486249909675718444E0,
        -1.79589318631187989172765950534E1,
        2.79488845294199600508499808837E1,
        -2.85899827713502369474065508674E0,
        -8.87285693353062954433549289258E0,
        1.23605671757943030647266201528E1,
        6.43392746015763530355970484046E-1,
    ],
];

const B: [f64; 12] = [
    5.42937341165687622380535766363E-2,
    0.0,
    0.0,
    0.0,
    0.0,
    4.45031289275240888144113950566E0,
    1.89151789931450038304281599044E0,
    -5.8012039600105847814672114227E0,
    3.1116436695781989440891606237E-1,
    -1.52160949662516078556178806805E-1,
    2.01365400804030348374776537501E-1,
    4.47106157277725905176885569043E-2,
];

const BHH: [f64; 3] = [
    0.244094488188976377952755905512E+00,
    0.733846688281611857341361741547E+00,
    0.220588235294117647058823529412E-01,
];

const E: [f64; 12] = [
    0.1312004499419488073250102996E-01,
    0.0,
    0.0,
    0.0,
    0.0,
    -0.1225156446376204440720569753E+01,
    -0.4957589496572501915214079952E+00,
    0.1664377182454986536961530415E+01,
    -0.3503288487499736816886487290E+00,
    0.3341791187130174790297318841E+00,
    0.8192320648511571246570742613E-01,
    -0.2235530786388629525884427845E-01,
];

/// Result of one attempted step.
#[derive(Debug, Clone)]
pub struct TrialStep {
    pub y: Vec<f64>,
    pub err: f64,
}

impl Dop853 {
    pub fn new(rtol: f64, atol: Vec<f64>) -> Self {
        Dop853 {
            rtol,
            atol,
            max_steps: 1_000_000,
            h_max: f64::INFINITY,
            safety: 0.9,
            beta: 0.04,
            fac_min: 1.0 / 3.0,
            fac_max: 6.0,
        }
    }

    pub fn with_max_steps(mut self, n: usize) -> Self {
        self.max_steps = n;
        self
    }

    pub fn with_h_max(mut self, h: f64) -> Self {
        self.h_max = h;
        self
    }

    fn atol(&self, i: usize) -> f64 {
        if self.atol.len() == 1 {
            self.atol[0]
        } else {
            self.atol[i]
        }
    }

    /// Prepares a state at `(t0, y0)` with initial step guess `h0`
    /// (`h0 <= 0` selects one automatically).
    pub fn start<S: OdeSystem>(&self, sys: &S, t0: f64, y0: &[f64], h0: f64) -> OdeState {
        let n = sys.dim();
        let mut dy = vec![0.0; n];
        sys.rhs(t0, y0, &mut dy);
        let h = if h0 > 0.0 {
            h0
        } else {
            self.initial_step(sys, t0, y0, &dy)
        };
        OdeState {
            t: t0,
            y: y0.to_vec(),
            dy,
            h: h.min(self.h_max),
            facold: 1e-4,
            stats: StepStats {
                evaluations: 2,
                ..Default::default()
            },
        }
    }

    fn initial_step<S: OdeSystem>(&self, sys: &S, t0: f64, y0: &[f64], f0: &[f64]) -> f64 {
        let n = y0.len();
        let (mut dnf, mut dny) = (0.0, 0.0);
        for i in 0..n {
            let sk = self.atol(i) + self.rtol * y0[i].abs();
            dnf += (f0[i] / sk).powi(2);
            dny += (y0[i] / sk).powi(2);
        }
        let mut h = if dnf <= 1e-10 || dny <= 1e-10 {
            1e-6
        } else {
            (dny / dnf).sqrt() * 0.01
        };
        h = h.min(self.h_max);
        let y1: Vec<f64> = (0..n).map(|i| y0[i] + h * f0[i]).collect();
        let mut f1 = vec![0.0; n];
        sys.rhs(t0 + h, &y1, &mut f1);
        let mut der2 = 0.0;
        for i in 0..n {
            let sk = self.atol(i) + self.rtol * y0[i].abs();
            der2 += ((f1[i] - f0[i]) / sk).powi(2);
        }
        let der2 = der2.sqrt() / h;
        let der12 = der2.max(dnf.sqrt());
        let h1 = if der12 <= 1e-15 {
            (h * 1e-3).max(1e-6)
        } else {
            (0.01 / der12).powf(1.0 / 8.0)
        };
        (100.0 * h).min(h1).min(self.h_max)
    }

    /// Takes one step of size `h` from `(t, y)` with derivative `dy`, without
    /// any step-size control.
    pub fn trial_step<S: OdeSystem>(
        &self,
        sys: &S,
        t: f64,
        y: &[f64],
        dy: &[f64],
        h: f64,
    ) -> TrialStep {
        let n = y.len();
        let mut k: Vec<Vec<f64>> = vec![vec![0.0; n]; 12];
        k[0].copy_from_slice(dy);
        let mut ys = vec![0.0; n];
        for s in 1..12 {
            for i in 0..n {
                let mut acc = 0.0;
                for (j, a) in A[s].iter().enumerate() {
                    if *a != 0.0 {
                        acc += a * k[j][i];
                    }
                }
                ys[i] = y[i] + h * acc;
            }
            sys.rhs(t + C[s] * h, &ys, &mut k[s]);
        }
        let mut y_new = vec![0.0; n];
        let (mut err, mut err2) = (0.0, 0.0);
        for i in 0..n {
            let mut inc = 0.0;
            let mut e5 = 0.0;
            for s in 0..12 {
                inc += B[s] * k[s][i];
                e5 += E[s] * k[s][i];
            }
            y_new[i] = y[i] + h * inc;
            let e3 = inc - BHH[0] * k[0][i] - BHH[1] * k[8][i] - BHH[2] * k[11][i];
            let sk = self.atol(i) + self.rtol * y[i].abs().max(y_new[i].abs());
            err += (e5 / sk).powi(2);
            err2 += (e3 / sk).powi(2);
        }
        let mut deno = err + 0.01 * err2;
        if deno <= 0.0 {
            deno = 1.0;
        }
        let err = h.abs() * err * (1.0 / (deno * n as f64)).sqrt();
        TrialStep { y: y_new, err }
    }

    /// Advances `state` by one accepted step, never past `t_max`.
    /// Returns the size of the accepted step.
    pub fn advance<S: OdeSystem>(
        &self,
        sys: &S,
        state: &mut OdeState,
        t_max: f64,
    ) -> Result<f64, OdeError> {
        let expo1 = 1.0 / 8.0 - self.beta * 0.2;
        loop {
            if state.stats.accepted + state.stats.rejected >= self.max_steps {
                return Err(OdeError::StepBudget {
                    t: state.t,
                    max_steps: self.max_steps,
                });
            }
            let mut h = state.h.min(self.h_max);
            if state.t + h >= t_max {
                h = t_max - state.t;
            }
            if h <= f64::EPSILON * state.t.abs().max(1e-300) * 10.0 {
                return Err(OdeError::StepUnderflow { t: state.t });
            }
            let trial = self.trial_step(sys, state.t, &state.y, &state.dy, h);
            state.stats.evaluations += 11;
            if !trial.err.is_finite() || trial.y.iter().any(|v| !v.is_finite()) {
                state.stats.rejected += 1;
                state.h = h * 0.25;
                if state.h < 1e-300 {
                    return Err(OdeError::NonFinite { t: state.t });
                }
                continue;
            }
            let fac11 = trial.err.powf(expo1);
            let fac = fac11 / state.facold.powf(self.beta);
            let fac = (fac / self.safety).clamp(1.0 / self.fac_max, 1.0 / self.fac_min);
            if trial.err <= 1.0 {
                state.facold = trial.err.max(1e-4);
                state.t += h;
                state.y = trial.y;
                sys.rhs(state.t, &state.y, &mut state.dy);
                state.stats.evaluations += 1;
                state.stats.accepted += 1;
                state.h = (h / fac).min(self.h_max);
                return Ok(h);
            } else {
                state.stats.rejected += 1;
                state.h = h / (fac11 / self.safety).min(1.0 / self.fac_min);
            }
        }
    }

    /// Integrates to `t_end`, returning the final state.
    pub fn integrate<S: OdeSystem>(
        &self,
        sys: &S,
        t0: f64,
        y0: &[f64],
        t_end: f64,
    ) -> Result<OdeState, OdeError> {
        let mut st = self.start(sys, t0, y0, 0.0);
        while st.t < t_end {
            self.advance(sys, &mut st, t_end)?;
        }
        Ok(st)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Osc;
    impl OdeSystem for Osc {
        fn dim(&self) -> usize {
            2
        }
        fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = y[1];
            dy[1] = -y[0];
        }
    }

    #[test]
    fn harmonic_oscillator_long_run() {
        let s = Dop853::new(1e-12, vec![1e-14]);
        let st = s.integrate(&Osc, 0.0, &[0.0, 1.0], 100.0).unwrap();
        assert!(
            (st.y[0] - 100f64.sin()).abs() < 1e-9,
            "{}",
            st.y[0] - 100f64.sin()
        );
        assert!((st.y[1] - 100f64.cos()).abs() < 1e-9);
    }

    struct Expo;
    impl OdeSystem for Expo {
        fn dim(&self) -> usize {
            1
        }
        fn rhs(&self, t: f64, y: &[f64], dy: &mut [f64]) {
            dy[0] = y[0] * t.cos();
        }
    }

    #[test]
    fn nonautonomous_scalar() {
        let s = Dop853::new(1e-11, vec![1e-13]);
        let st = s.integrate(&Expo, 0.0, &[1.0], 7.0).unwrap();
        assert!((st.y[0] - 7f64.sin().exp()).abs() < 1e-9);
    }

    #[test]
    fn eighth_order_single_step() {
        // One step of y' = y over h: local error should scale like h^9.
        struct Lin;
        impl OdeSystem for Lin {
            fn dim(&self) -> usize {
                1
            }
            fn rhs(&self, _t: f64, y: &[f64], dy: &mut [f64]) {
                dy[0] = y[0];
            }
        }
        let s = Dop853::new(1e-10, vec![1e-10]);
        let e = |h: f64| (s.trial_step(&Lin, 0.0, &[1.0], &[1.0], h).y[0] - h.exp()).abs();
        let r = e(0.4) / e(0.2);
        assert!(r > 300.0, "ratio {r}");
    }
}
