from efcost import channels, linalg, measures, states, utils, variational

__version__ = "0.1.0"
