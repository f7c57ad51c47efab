# %% [markdown]
# # Operating points and the two loss models
#
# We map a few steady (speed, torque) points to inverter operating points and
# compare the period-averaged loss formulas with the same losses evaluated
# once per switching period.

# %%
import numpy as np

from powerlife.config import DEFAULT_CONFIG, load_config
from powerlife.electrical import operating_points
from powerlife.losses import loss_output_period, output_period_average, switching_period_series

cfg = load_config(DEFAULT_CONFIG)
machine, device = cfg.machine, cfg.device
device

# %% [markdown]
# Four city and four highway points (rpm, N*m), already downscaled so the
# peak current sits near the device rating.

# %%
points = {
    "HWFET-I": (362.78, 3.335), "HWFET-II": (362.80, 0.554),
    "HWFET-III": (906.68, 0.557), "HWFET-IV": (816.18, 2.781),
    "NYCC-I": (41.89, 3.367), "NYCC-II": (41.89, 0.556),
    "NYCC-III": (377.43, 0.752), "NYCC-IV": (377.43, 2.714),
}
for name, (rpm, tq) in points.items():
    op = operating_points(rpm, tq, machine)
    print(f"{name:>10}: I_m={float(op.i_m):6.2f} A  f_e={float(op.f_e):6.2f} Hz  m={float(op.m):.3f}  phi={float(op.phi):+.3f} rad")

# %% [markdown]
# The switching-period samples follow the phase current, so the IGBT only
# heats on the positive half-wave.  Averaged over one output period they
# land on the closed-form values.

# %%
op = operating_points(*points["NYCC-I"], machine)
closed = loss_output_period(op, device).terms()
avg = output_period_average(op, device).terms()
for k in closed:
    print(f"{k:>7}: closed form {float(closed[k]):7.4f} W   switching-period mean {avg[k]:7.4f} W")

# %%
s = switching_period_series(op, device, int(machine.f_sw / float(op.f_e)))
print("IGBT loss over one output period: min %.2f W, max %.2f W" % (s.p_igbt.min(), s.p_igbt.max()))
print("fraction of switching periods with IGBT loss:", np.mean(s.p_igbt > 0).round(3))
