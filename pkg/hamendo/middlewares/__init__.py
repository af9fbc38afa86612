from hamendo.middlewares.family_via_distances import (
    FamilyViaDistanceSetMiddleware,
    InformationalOrderMiddleware,
)
