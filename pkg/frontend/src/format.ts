/** Display formatting. Losses and altitudes are shown verbatim from the
 * service JSON (no rounding): the screen must agree with the wire. */

export function formatLoss(lossM: number): string {
  return `${lossM} m`;
}

export function formatAltitude(altitudeM: number): string {
  return `${altitudeM} m`;
}

export function formatSpeed(speedMps: number): string {
  return `${speedMps} m/s`;
}

export function formatWind(wNorth: number, wEast: number): string {
  return `N ${wNorth} m/s, E ${wEast} m/s`;
}
