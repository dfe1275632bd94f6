//! Network analysis: graph indices, shortest and indoor/outdoor routes,
//! connectivity, and address matching.

mod connectivity;
mod geocode;
mod indices;
mod routing;

pub use connectivity::{connectivity, neighbors};
pub use geocode::{address_score, geocode, route_between_addresses, snap_to_node, AddressRoute, GeocodeMatch};
pub use indices::{measure_indices, NetworkIndices};
pub use routing::{indoor_outdoor_route, shortest_path, RouteResult};
