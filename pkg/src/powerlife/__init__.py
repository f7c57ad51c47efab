"""Mission-profile based loss, junction-temperature and lifetime estimation
for EV traction inverter power modules."""

__version__ = "0.1.0"
