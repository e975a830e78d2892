use crate::{Result, TrafficError};
use hawkes_core::EventSequences;
use serde::{Deserialize, Serialize};

/// Messages per window.
pub const WINDOW_LEN: usize = 128;

/// Service ids are allocated as `SERVICE_ID_BASE + ecu_index`, which is also
/// how messages are grouped back into MDHP dimensions.
pub const SERVICE_ID_BASE: u16 = 0x1000;

/// One SOME/IP-like record: the ten header-derived fields plus a timestamp.
/// Field widths are enforced by the integer types.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub service_id: u16,
    pub method_id: u16,
    pub length: u32,
    pub client_id: u16,
    pub session_id: u16,
    pub protocol_version: u8,
    pub interface_version: u8,
    pub message_type: u8,
    pub return_code: u8,
    /// Index into the scenario IP pool (benign ECUs first, then
    /// attacker-controlled addresses).
    pub src_ip_index: u16,
    /// Seconds.
    pub timestamp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Normal,
    Attack,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Normal => "normal",
            Label::Attack => "attack",
        }
    }
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A labeled block of exactly [`WINDOW_LEN`] consecutive messages.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    messages: Vec<Message>,
    label: Label,
    scenario_id: u8,
}

impl Window {
    pub fn new(messages: Vec<Message>, label: Label, scenario_id: u8) -> Result<Self> {
        if messages.len() != WINDOW_LEN {
            return Err(TrafficError::InvalidWindow(format!(
                "expected {WINDOW_LEN} messages, got {}",
                messages.len()
            )));
        }
        if scenario_id > 8 {
            return Err(TrafficError::InvalidWindow(format!(
                "scenario_id {scenario_id} out of 0..=8"
            )));
        }
        let mut prev = f64::NEG_INFINITY;
        for m in &messages {
            if !m.timestamp.is_finite() || m.timestamp < 0.0 {
                return Err(TrafficError::InvalidWindow(format!(
                    "bad timestamp {}",
                    m.timestamp
                )));
            }
            if m.timestamp < prev {
                return Err(TrafficError::InvalidWindow(
                    "timestamps not ascending".into(),
                ));
            }
            prev = m.timestamp;
        }
        Ok(Self {
            messages,
            label,
            scenario_id,
        })
    }

    pub fn messages(&self) -> &[Message] {
        &self.messages
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn scenario_id(&self) -> u8 {
        self.scenario_id
    }

    pub fn first_timestamp(&self) -> f64 {
        self.messages[0].timestamp
    }

    pub fn last_timestamp(&self) -> f64 {
        self.messages[WINDOW_LEN - 1].timestamp
    }
}

/// Groups a window's messages into per-ECU event sequences by service id,
/// shifting timestamps so the window starts at zero. Messages whose service
/// id falls outside the `dims` ECUs are ignored.
pub fn window_to_events(w: &Window, dims: usize) -> Result<EventSequences> {
    let t0 = w.first_timestamp();
    let mut span = w.last_timestamp() - t0;
    if span <= 0.0 {
        span = 1e-9; // degenerate window; estimation will reject it anyway
    }
    let mut times = vec![Vec::new(); dims];
    for m in w.messages() {
        let dim = m.service_id.wrapping_sub(SERVICE_ID_BASE) as usize;
        if dim < dims {
            times[dim].push(m.timestamp - t0);
        }
    }
    Ok(EventSequences::new(times, span)?)
}
