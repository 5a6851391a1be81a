use super::PowerMetric;

/// Periodic Msg1 attacker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackerConfig {
    /// Transmission period `T_a` in ROs; `1` is continuous flooding.
    pub period: u32,
    /// Received power metric of the attacker's Msg1 at the gNB.
    pub power: PowerMetric,
    /// ROs the attacker transmits ahead of the UE's first attempt.
    pub early_start: u32,
    pub enabled: bool,
}

impl AttackerConfig {
    pub fn disabled(power: PowerMetric) -> Self {
        AttackerConfig {
            period: 1,
            power,
            early_start: 0,
            enabled: false,
        }
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.period == 0 {
            out.push("attacker.period must be >= 1".to_string());
        }
        out
    }

    /// Whether the attacker transmits at the `nth` RO counted from its onset.
    pub fn transmits_at(&self, since_onset: u64) -> bool {
        self.enabled && self.period > 0 && since_onset.is_multiple_of(u64::from(self.period))
    }
}

/// Measured RO power under the periodic attack schedule.
///
/// Index `0` precedes the attack; index `i > 0` carries the attacker's power
/// when `(i - 1) mod T_a == 0`.
pub fn measured_power(
    ro_index: u64,
    attacker: &AttackerConfig,
    p_noise: PowerMetric,
) -> PowerMetric {
    if ro_index > 0 && attacker.transmits_at(ro_index - 1) {
        attacker.power
    } else {
        p_noise
    }
}
