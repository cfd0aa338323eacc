"""Canonical color order and RGB values shared by rendering and language."""

COLOR_NAMES = ("blue", "brown", "gray", "green", "orange", "purple", "red", "yellow")

COLOR_RGB = {
    "blue": (48, 86, 211),
    "brown": (133, 87, 35),
    "gray": (128, 128, 128),
    "green": (68, 158, 49),
    "orange": (232, 137, 40),
    "purple": (136, 62, 168),
    "red": (208, 49, 45),
    "yellow": (222, 203, 41),
}

N_COLORS = len(COLOR_NAMES)


def color_id(name: str) -> int:
    return COLOR_NAMES.index(name)
