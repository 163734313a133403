use serde::{Deserialize, Serialize};

use super::{Checker, DomainError, Result, WEEKS_PER_YEAR};

/// Extraction-condensing CHP unit. Hourly quantities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChpParams {
    /// MWe per hour.
    pub p_max: f64,
    pub p_min: f64,
    /// MWt per hour.
    pub q_max: f64,
    /// Power lost per unit of extracted heat (negative).
    pub theta: f64,
    /// Minimum power-to-heat ratio (back-pressure line).
    pub xi: f64,
    pub ramp_up: f64,
    pub ramp_down: f64,
    pub eff_power: f64,
    pub eff_heat: f64,
    /// Hours.
    pub min_up: u32,
    pub min_down: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuxBoilerParams {
    pub q_max: f64,
    pub eff: f64,
    /// €/MWt
    pub om_cost: f64,
    pub tax: f64,
    pub co2_tax: f64,
}

/// Two-level biomass safety stock: `season` inside the heating-season weeks
/// (inclusive, 1-based), `off_season` elsewhere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SafetyLevel {
    pub season: f64,
    pub off_season: f64,
    #[serde(default = "default_season_weeks")]
    pub season_weeks: [u32; 2],
}

fn default_season_weeks() -> [u32; 2] {
    [20, 45]
}

impl SafetyLevel {
    pub fn flat(level: f64) -> Self {
        SafetyLevel {
            season: level,
            off_season: level,
            season_weeks: default_season_weeks(),
        }
    }

    /// Safety stock for a 1-based planning week.
    pub fn at_week(&self, week: usize) -> f64 {
        let [lo, hi] = self.season_weeks;
        if (lo as usize..=hi as usize).contains(&week) {
            self.season
        } else {
            self.off_season
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiomassStorageParams {
    /// MWt
    pub cap: f64,
    pub safety: SafetyLevel,
    /// MWt per hour.
    pub max_outflow: f64,
    /// Minimum hours between two deliveries from any supplier.
    pub delivery_gap: u32,
    pub initial: f64,
    /// MWt per tonne.
    pub calorific: f64,
    /// €/MWt per period.
    pub inventory_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThermalStorageParams {
    pub cap_min: f64,
    pub cap_max: f64,
    pub max_flow: f64,
    pub initial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CostParams {
    /// €/MWt
    pub chp_op: f64,
    /// € per start / stop.
    pub startup: f64,
    pub shutdown: f64,
    /// €/MWe
    pub elec_tax: f64,
    pub biomass_incentive: f64,
    /// Target share of heat produced from biomass, per unit.
    pub biomass_share_target: f64,
    /// € per MWt of storage excess.
    pub penalty_store: f64,
    /// € per MWh of missed heat.
    pub penalty_miss: f64,
    /// € per MWt short of the biomass share target.
    pub penalty_bm: f64,
}

/// Everything technical and economic about one municipality's system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantConfig {
    pub name: String,
    /// Weeks in the planning year.
    #[serde(default = "default_weeks")]
    pub weeks: usize,
    pub chp: ChpParams,
    pub aux: AuxBoilerParams,
    pub biomass_storage: BiomassStorageParams,
    pub thermal_storage: ThermalStorageParams,
    pub costs: CostParams,
}

fn default_weeks() -> usize {
    WEEKS_PER_YEAR
}

/// One supplier's offer. Amounts are tonnes per delivery, prices are per
/// unit of contracted amount.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractSpec {
    pub id: String,
    pub base_price: f64,
    pub up_price: f64,
    pub down_price: f64,
    pub amount_min: f64,
    pub amount_max: f64,
    /// Minimum hours between two deliveries of this contract.
    pub freq: u32,
    pub deliveries_min: u32,
    pub deliveries_max: u32,
    pub opt_up: f64,
    pub opt_down: f64,
}

impl ContractSpec {
    /// Fixed contracts sell no up/down options.
    pub fn is_fixed(&self) -> bool {
        self.opt_up == 0.0 && self.opt_down == 0.0
    }

    pub(crate) fn check(&self, path: &str, c: &mut Checker) {
        let p = |f: &str| format!("{path}.{f}");
        c.check(!self.id.trim().is_empty(), p("id"), "id is non-empty");
        c.check(
            self.id.chars().all(|ch| !ch.is_whitespace()),
            p("id"),
            "id contains no whitespace",
        );
        c.check(self.amount_min >= 0.0, p("amount_min"), "amount_min >= 0");
        c.check(
            self.amount_min <= self.amount_max,
            p("amount_min"),
            format!(
                "amount_min <= amount_max ({} > {})",
                self.amount_min, self.amount_max
            ),
        );
        c.check(
            self.deliveries_min <= self.deliveries_max,
            p("deliveries_min"),
            format!(
                "deliveries_min <= deliveries_max ({} > {})",
                self.deliveries_min, self.deliveries_max
            ),
        );
        for (name, v) in [("opt_up", self.opt_up), ("opt_down", self.opt_down)] {
            c.check(
                (0.0..=1.0).contains(&v),
                p(name),
                format!("0 <= {name} <= 1"),
            );
        }
        for (name, v) in [
            ("base_price", self.base_price),
            ("up_price", self.up_price),
            ("down_price", self.down_price),
        ] {
            c.check(v >= 0.0, p(name), format!("{name} >= 0"));
        }
        c.check(self.freq > 0, p("freq"), "freq > 0");
    }
}

fn finite_fields(c: &mut Checker, path: &str, fields: &[(&str, f64)]) {
    for (name, v) in fields {
        c.check(
            v.is_finite(),
            format!("{path}.{name}"),
            format!("{name} is finite"),
        );
    }
}

impl PlantConfig {
    /// Checks every type invariant; all violations are reported together.
    pub fn validate(&self) -> Result<()> {
        let mut c = Checker::default();
        self.check(&mut c);
        c.finish()
    }

    pub(crate) fn check(&self, c: &mut Checker) {
        c.check(
            (1..=WEEKS_PER_YEAR).contains(&self.weeks),
            "plant.weeks",
            "1 <= weeks <= 52",
        );

        let chp = &self.chp;
        finite_fields(
            c,
            "plant.chp",
            &[
                ("p_max", chp.p_max),
                ("p_min", chp.p_min),
                ("q_max", chp.q_max),
                ("theta", chp.theta),
                ("xi", chp.xi),
                ("ramp_up", chp.ramp_up),
                ("ramp_down", chp.ramp_down),
                ("eff_power", chp.eff_power),
                ("eff_heat", chp.eff_heat),
            ],
        );
        c.check(chp.p_min > 0.0, "plant.chp.p_min", "0 < p_min");
        c.check(chp.p_min <= chp.p_max, "plant.chp.p_min", "p_min <= p_max");
        c.check(chp.q_max > 0.0, "plant.chp.q_max", "q_max > 0");
        c.check(
            chp.eff_power > 0.0 && chp.eff_power <= 1.0,
            "plant.chp.eff_power",
            "0 < eff_power <= 1",
        );
        c.check(
            chp.eff_heat > 0.0 && chp.eff_heat <= 1.0,
            "plant.chp.eff_heat",
            "0 < eff_heat <= 1",
        );
        c.check(chp.ramp_up > 0.0, "plant.chp.ramp_up", "ramp_up > 0");
        c.check(chp.ramp_down > 0.0, "plant.chp.ramp_down", "ramp_down > 0");
        c.check(chp.min_up >= 1, "plant.chp.min_up", "min_up >= 1");
        c.check(chp.min_down >= 1, "plant.chp.min_down", "min_down >= 1");
        c.check(chp.xi > 0.0, "plant.chp.xi", "xi > 0");

        let aux = &self.aux;
        finite_fields(
            c,
            "plant.aux",
            &[
                ("q_max", aux.q_max),
                ("eff", aux.eff),
                ("om_cost", aux.om_cost),
                ("tax", aux.tax),
                ("co2_tax", aux.co2_tax),
            ],
        );
        c.check(aux.q_max > 0.0, "plant.aux.q_max", "q_max > 0");
        c.check(
            aux.eff > 0.0 && aux.eff <= 1.0,
            "plant.aux.eff",
            "0 < eff <= 1",
        );
        for (name, v) in [
            ("om_cost", aux.om_cost),
            ("tax", aux.tax),
            ("co2_tax", aux.co2_tax),
        ] {
            c.check(
                v >= 0.0,
                format!("plant.aux.{name}"),
                format!("{name} >= 0"),
            );
        }

        let bs = &self.biomass_storage;
        finite_fields(
            c,
            "plant.biomass_storage",
            &[
                ("cap", bs.cap),
                ("max_outflow", bs.max_outflow),
                ("initial", bs.initial),
                ("calorific", bs.calorific),
                ("inventory_cost", bs.inventory_cost),
            ],
        );
        for week in 1..=self.weeks.max(1) {
            let level = bs.safety.at_week(week);
            if !(0.0..=bs.cap).contains(&level) {
                c.check(
                    false,
                    "plant.biomass_storage.safety",
                    format!("0 <= safety level <= cap in every week (week {week}: {level})"),
                );
                break;
            }
        }
        c.check(
            bs.safety.season_weeks[0] <= bs.safety.season_weeks[1],
            "plant.biomass_storage.safety.season_weeks",
            "season start <= season end",
        );
        c.check(
            (0.0..=bs.cap).contains(&bs.initial),
            "plant.biomass_storage.initial",
            "0 <= initial <= cap",
        );
        c.check(
            bs.calorific > 0.0,
            "plant.biomass_storage.calorific",
            "calorific > 0",
        );
        c.check(
            bs.max_outflow > 0.0,
            "plant.biomass_storage.max_outflow",
            "max_outflow > 0",
        );
        c.check(
            bs.inventory_cost >= 0.0,
            "plant.biomass_storage.inventory_cost",
            "inventory_cost >= 0",
        );

        let ts = &self.thermal_storage;
        finite_fields(
            c,
            "plant.thermal_storage",
            &[
                ("cap_min", ts.cap_min),
                ("cap_max", ts.cap_max),
                ("max_flow", ts.max_flow),
                ("initial", ts.initial),
            ],
        );
        c.check(
            ts.cap_min <= ts.initial && ts.initial <= ts.cap_max,
            "plant.thermal_storage.initial",
            "cap_min <= initial <= cap_max",
        );
        c.check(
            ts.max_flow > 0.0,
            "plant.thermal_storage.max_flow",
            "max_flow > 0",
        );

        let k = &self.costs;
        finite_fields(
            c,
            "plant.costs",
            &[
                ("chp_op", k.chp_op),
                ("startup", k.startup),
                ("shutdown", k.shutdown),
                ("elec_tax", k.elec_tax),
                ("biomass_incentive", k.biomass_incentive),
                ("biomass_share_target", k.biomass_share_target),
                ("penalty_store", k.penalty_store),
                ("penalty_miss", k.penalty_miss),
                ("penalty_bm", k.penalty_bm),
            ],
        );
        for (name, v) in [
            ("penalty_store", k.penalty_store),
            ("penalty_miss", k.penalty_miss),
            ("penalty_bm", k.penalty_bm),
            ("startup", k.startup),
            ("shutdown", k.shutdown),
        ] {
            c.check(
                v >= 0.0,
                format!("plant.costs.{name}"),
                format!("{name} >= 0"),
            );
        }
        c.check(
            (0.0..=1.0).contains(&k.biomass_share_target),
            "plant.costs.biomass_share_target",
            "0 <= biomass_share_target <= 1",
        );
    }

    /// Hours in the planning year.
    pub fn hours(&self) -> usize {
        self.weeks * super::HOURS_PER_WEEK
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    plant: PlantConfig,
    #[serde(default)]
    contracts: Vec<ContractSpec>,
}

/// Parses a municipality document (`{"plant": {...}, "contracts": [...]}`)
/// and checks every invariant.
pub fn load_and_validate(text: &str) -> Result<(PlantConfig, Vec<ContractSpec>)> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let doc: Document = serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let message = err.inner().to_string();
        match missing_field(&message) {
            Some(field) if path == "." => DomainError::MissingField {
                path: field.to_string(),
            },
            Some(field) => DomainError::MissingField {
                path: format!("{path}.{field}"),
            },
            None => DomainError::Parse { path, message },
        }
    })?;

    let mut c = Checker::default();
    doc.plant.check(&mut c);
    for (i, contract) in doc.contracts.iter().enumerate() {
        contract.check(&format!("contracts[{i}]"), &mut c);
        if doc.contracts[..i].iter().any(|o| o.id == contract.id) {
            c.check(
                false,
                format!("contracts[{i}].id"),
                "contract ids are unique",
            );
        }
    }
    c.finish()?;
    Ok((doc.plant, doc.contracts))
}

fn missing_field(message: &str) -> Option<&str> {
    let rest = message.strip_prefix("missing field `")?;
    rest.split('`').next()
}
