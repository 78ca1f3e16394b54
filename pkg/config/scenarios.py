from config.settings import SPAMMER_PHI_RANGE

# Single-dispersion group characterizations, keyed by (low, high]
DISPERSION_GROUPS = {
    "experts": (0.0, 0.25),  # Strong collective similarity
    "observers": (0.25, 0.5),  # Weak collective similarity
    "public": (0.5, 0.75),  # Weak collective dissimilarity
    "jumble": (0.75, 1.0),  # Strong collective dissimilarity
}

# Minority kinds for the two-group scenarios
SPAMMERS = "spammers"
CONTRARIANS = "contrarians"
MINORITY_KINDS = (SPAMMERS, CONTRARIANS)

MINORITY_DESCRIPTIONS = {
    SPAMMERS: f"near-arbitrary opinions drawn around the ground truth with phi in "
    f"({SPAMMER_PHI_RANGE[0]}, {SPAMMER_PHI_RANGE[1]}]",
    CONTRARIANS: "cohesive opinions drawn around the reversed ground truth",
}


def dispersion_group(phi: float) -> str:
    """
    Names the group characterization a dispersion value falls into.
    """
    for name, (low, high) in DISPERSION_GROUPS.items():
        if low < phi <= high:
            return name
    raise ValueError(f"Dispersion {phi} is outside (0, 1]")
