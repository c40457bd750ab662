"""numsym - numberings of posets, the groups generated by their involutions,
graded ideal graphs and central measures."""

__version__ = "0.1.0"
