//! Families built from config expressions.

use height_core::elliptic::WeierstrassFamily;

use crate::config::FamilySpec;
use crate::expr::parse_expression;
use crate::field::LabField;
use crate::LabError;

pub fn build_family<K: LabField>(field: &K, spec: &FamilySpec) -> Result<WeierstrassFamily<K>, LabError> {
    let c = field.constants();
    let a = parse_expression(&spec.a, "s", &c)?;
    let b = parse_expression(&spec.b, "s", &c)?;
    let section = match &spec.section {
        Some([x, y]) => Some((parse_expression(x, "s", &c)?, parse_expression(y, "s", &c)?)),
        None => None,
    };
    WeierstrassFamily::new(field.clone(), a, b, section).map_err(LabError::Family)
}
