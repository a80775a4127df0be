use qclock::dsl::DslError;
use qclock::scaling::ScalingError;
use qclock::{ClockError, DynamicsError, FrobeniusError, SpectraError, TensorError};
use serde::Serialize;

/// Machine-readable error, printed as JSON on stderr with exit status 2.
#[derive(Debug, Serialize)]
pub struct Failure {
    pub error: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

impl Failure {
    pub fn new(error: &'static str, message: impl Into<String>) -> Self {
        Self { error, message: message.into(), residual: None }
    }

    fn with_residual(mut self, residual: f64) -> Self {
        self.residual = Some(residual);
        self
    }
}

fn tensor_kind(e: &TensorError) -> &'static str {
    match e {
        TensorError::DimensionMismatch { .. } => "DimensionMismatch",
        TensorError::InvalidDimension(_) => "InvalidDimension",
        TensorError::EntryCount { .. } => "EntryCount",
        TensorError::NonFinite(_) => "NonFinite",
        TensorError::IndexOutOfRange { .. } => "IndexOutOfRange",
    }
}

fn clock_kind(e: &ClockError) -> &'static str {
    match e {
        ClockError::InvalidLabel { .. } => "InvalidLabel",
        ClockError::NonIntegerVolume { .. } => "NonIntegerVolume",
    }
}

impl From<TensorError> for Failure {
    fn from(e: TensorError) -> Self {
        Failure::new(tensor_kind(&e), e.to_string())
    }
}

impl From<ClockError> for Failure {
    fn from(e: ClockError) -> Self {
        Failure::new(clock_kind(&e), e.to_string())
    }
}

impl From<DynamicsError> for Failure {
    fn from(e: DynamicsError) -> Self {
        let message = e.to_string();
        match e {
            DynamicsError::NotUnitary { residual } => Failure::new("NotUnitary", message).with_residual(residual),
            DynamicsError::NotCyclic { residual } => Failure::new("NotCyclic", message).with_residual(residual),
            DynamicsError::NonOrthogonal { residual } => Failure::new("NonOrthogonal", message).with_residual(residual),
            DynamicsError::IncompleteBasis { .. } => Failure::new("IncompleteBasis", message),
            DynamicsError::ClockMismatch => Failure::new("ClockMismatch", message),
            DynamicsError::InvalidFamily(_) => Failure::new("InvalidFamily", message),
            DynamicsError::Clock(c) => c.into(),
            DynamicsError::Tensor(t) => t.into(),
        }
    }
}

impl From<SpectraError> for Failure {
    fn from(e: SpectraError) -> Self {
        let message = e.to_string();
        match e {
            SpectraError::InvalidSystem { residual } => Failure::new("InvalidSystem", message).with_residual(residual),
            SpectraError::InvalidFamily(_) => Failure::new("InvalidFamily", message),
            SpectraError::ZeroState => Failure::new("ZeroState", message),
            SpectraError::Tensor(t) => t.into(),
        }
    }
}

impl From<ScalingError> for Failure {
    fn from(e: ScalingError) -> Self {
        let message = e.to_string();
        match e {
            ScalingError::OutOfRange { .. } => Failure::new("OutOfRange", message),
            ScalingError::EmptySpectrum => Failure::new("EmptySpectrum", message),
            ScalingError::UnsortedGrids => Failure::new("UnsortedGrids", message),
            ScalingError::Clock(c) => c.into(),
            ScalingError::Dynamics(d) => d.into(),
        }
    }
}

impl From<FrobeniusError> for Failure {
    fn from(e: FrobeniusError) -> Self {
        let message = e.to_string();
        match e {
            FrobeniusError::InvalidDimension => Failure::new("InvalidDimension", message),
            FrobeniusError::NotCommutative { residual } => Failure::new("NotCommutative", message).with_residual(residual),
            FrobeniusError::Tensor(t) => t.into(),
        }
    }
}

impl From<DslError> for Failure {
    fn from(e: DslError) -> Self {
        let kind = match &e {
            DslError::SyntaxError { .. } => "SyntaxError",
            DslError::UnknownGenerator { .. } => "UnknownGenerator",
            DslError::ProfileMismatch { .. } => "ProfileMismatch",
            DslError::UnboundSystem { .. } => "UnboundSystem",
            DslError::ClockMismatch => "ClockMismatch",
        };
        Failure::new(kind, e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new("Io", e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new("InvalidJson", e.to_string())
    }
}
