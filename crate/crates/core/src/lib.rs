//! Read, write, validate, and analyze event logs with *uncertain* event
//! data: activities recorded as candidate sets or probability maps,
//! timestamps as intervals or densities, and events that may not have
//! happened at all.
//!
//! The wire format is XES XML plus a small set of `uncertainty:*`
//! attributes; certain logs are the degenerate case and parse unchanged.
//! On top of the model sit realization tools (enumerate every concrete
//! trace an uncertain trace admits, compute its probability, or sample
//! reproducibly) and a noise injector that turns certain logs into
//! uncertain ones for experiments.
//!
//! ```
//! use uxes::xes::read_str;
//!
//! let log = read_str(r#"<log>
//!   <trace>
//!     <string key="concept:name" value="c1"/>
//!     <event>
//!       <string key="concept:name" value="A"/>
//!       <date key="time:timestamp" value="2011-07-05T12:00:00+00:00"/>
//!       <container key="uncertainty:discrete_strong">
//!         <bool key="uncertainty:indeterminacy" value="true"/>
//!       </container>
//!     </event>
//!   </trace>
//! </log>"#).unwrap();
//! assert!(log.traces[0].events[0].is_strongly_uncertain());
//! ```

pub mod axis;
pub mod error;
pub mod inject;
pub mod model;
pub mod realize;
pub mod report;
pub mod rng;
pub mod stats;
pub mod validate;
pub mod xes;

pub use error::{Error, Result};
pub use model::{
    ActivityLabel, DensityKind, DensitySpec, Timestamp, UncertainActivity, UncertainEvent,
    UncertainIndeterminacy, UncertainLog, UncertainTimestamp, UncertainTrace,
};
