use thiserror::Error;

use crate::ga::GaError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Algebra(#[from] GaError),

    #[error("invalid signal: {0}")]
    InvalidSignal(String),

    #[error("order {0} has no slot in the basis layout")]
    NoSlot(f64),

    #[error("order {0} appears more than once")]
    DuplicateOrder(f64),

    #[error("basis layouts or fundamentals differ")]
    LayoutMismatch,

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("series capacitor blocks DC: source has a {0} V DC component")]
    DcThroughCapacitor(f64),

    #[error("impedance is zero at order {0}")]
    ZeroImpedance(f64),

    #[error("cannot integrate a DC component")]
    IntegralOfDc,

    #[error("voltage phasor is zero")]
    ZeroVoltage,

    #[error("no admittance for order {0} present in the voltage")]
    MissingAdmittance(f64),

    #[error("apparent power is zero")]
    ZeroApparentPower,

    #[error("fundamental component missing or zero")]
    MissingFundamental,

    #[error("invalid waveform: {0}")]
    InvalidWaveform(String),

    #[error("window spans {0} fundamental periods; an integer number is required")]
    NonIntegerPeriods(f64),

    #[error("waveform lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
