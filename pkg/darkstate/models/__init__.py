from darkstate.models.params import ComplexField, LadderParams, RabiPair

__all__ = ["ComplexField", "LadderParams", "RabiPair"]
