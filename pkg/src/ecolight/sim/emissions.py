"""CO2 model: idle term, cruise term linear in speed, and a positive-acceleration term."""

from .vehicles import VehicleClass


def compute_emissions(vclass: VehicleClass, speed: float, accel: float, dt: float) -> float:
    """Grams of CO2 emitted over ``dt`` seconds.

    Braking contributes nothing beyond the idle and speed terms.
    """
    if speed < 0:
        raise ValueError(f"speed must be non-negative, got {speed}")
    rate = vclass.idle_rate + vclass.speed_coeff * speed
    if accel > 0:
        rate += vclass.accel_coeff * speed * accel
    return dt * rate
