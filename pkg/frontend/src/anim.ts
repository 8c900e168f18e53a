// Client-side animation drivers for the RenderSpec descriptors. The server
// only ships parameters; all motion is computed here.

import type { FadeAnimation, JitterAnimation } from "./types.js";

const TWO_PI = Math.PI * 2;

/** Deterministic phase in [0, 2pi) from the server-assigned seed. */
export function phaseFromSeed(seed: number): number {
  return ((seed % 4096) / 4096) * TWO_PI;
}

/** Pixel offset of a jittering anchor at playback time t (seconds). */
export function jitterOffset(anim: JitterAnimation, t: number): { dx: number; dy: number } {
  if (anim.amplitude_px === 0) return { dx: 0, dy: 0 };
  const phase = phaseFromSeed(anim.phase_seed);
  const angle = TWO_PI * anim.frequency_hz * t + phase;
  return {
    dx: anim.amplitude_px * Math.sin(angle),
    dy: anim.amplitude_px * Math.cos(angle * 0.9 + phase),
  };
}

/**
 * Opacity multiplier of a temporally scheduled anchor at playback time t.
 * Anchors fade in over their own segment's cycle, remain for one more
 * cycle, then fade out.
 */
export function fadeOpacity(anim: FadeAnimation, t: number): number {
  const cycle = anim.cycle_seconds;
  const fade = Math.min(anim.fade_seconds, cycle);
  const fadeInStart = (anim.segment_index - 1) * cycle;
  const fadeOutStart = fadeInStart + 2 * cycle;
  if (t < fadeInStart || t > fadeOutStart + fade) return 0;
  if (t < fadeInStart + fade) return (t - fadeInStart) / fade;
  if (t > fadeOutStart) return 1 - (t - fadeOutStart) / fade;
  return 1;
}

export interface PlaybackState {
  playing: boolean;
  /** Playback clock in seconds. */
  t: number;
  segmentIndex: number;
  /** Fraction of the full run in [0, 1]. */
  progress: number;
}

/** Start/pause/replay controller for the temporal patina. */
export class TemporalPlayback {
  private t = 0;
  private playing = false;

  constructor(
    readonly segmentCount: number,
    readonly cycleSeconds: number,
    readonly fadeSeconds: number,
  ) {}

  /** Total run length: every segment's cycle plus the tail fade-out. */
  get duration(): number {
    return (this.segmentCount + 1) * this.cycleSeconds + this.fadeSeconds;
  }

  start(): void {
    if (this.t >= this.duration) this.t = 0;
    this.playing = true;
  }

  pause(): void {
    this.playing = false;
  }

  replay(): void {
    this.t = 0;
    this.playing = true;
  }

  /** Advance the clock; returns the new state. */
  tick(dtSeconds: number): PlaybackState {
    if (this.playing) {
      this.t = Math.min(this.t + dtSeconds, this.duration);
      if (this.t >= this.duration) this.playing = false;
    }
    return this.state();
  }

  state(): PlaybackState {
    const segment = Math.min(
      this.segmentCount,
      Math.floor(this.t / this.cycleSeconds) + 1,
    );
    return {
      playing: this.playing,
      t: this.t,
      segmentIndex: segment,
      progress: this.duration === 0 ? 0 : this.t / this.duration,
    };
  }
}
