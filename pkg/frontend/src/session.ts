// Rating-session state machine, independent of the DOM.
//
// States: loading -> trial -> (submitting) -> loading -> ... -> complete,
// with an error state for unloadable images.  A choice can only be
// submitted once both crops have loaded, and only one vote per trial is
// ever sent from a healthy session; a duplicate response from the server
// (e.g. after a retried submission) is absorbed by moving on.

import { Transport } from "./connector.js";
import {
  NextResponse,
  Progress,
  Side,
  TrialView,
  VoteSubmission,
  chosenItem,
} from "./types.js";

export type SessionState =
  | "loading"
  | "trial"
  | "submitting"
  | "complete"
  | "error";

export class LoadGate {
  private leftLoaded = false;
  private rightLoaded = false;
  private failed = false;

  markLoaded(side: Side): void {
    if (side === "left") this.leftLoaded = true;
    else this.rightLoaded = true;
  }

  markFailed(): void {
    this.failed = true;
  }

  get ready(): boolean {
    return this.leftLoaded && this.rightLoaded && !this.failed;
  }

  get broken(): boolean {
    return this.failed;
  }
}

export class RaterSession {
  state: SessionState = "loading";
  trial: TrialView | null = null;
  progress: Progress | null = null;
  gate = new LoadGate();
  private shownAt = 0;
  private submitted = new Set<number>();

  constructor(
    private transport: Transport,
    private workerId: string,
    private now: () => number = () => Date.now(),
  ) {}

  async loadNext(): Promise<SessionState> {
    this.state = "loading";
    let r: NextResponse;
    try {
      r = await this.transport.next(this.workerId);
    } catch {
      this.state = "error";
      return this.state;
    }
    this.progress = r.progress;
    if (r.status === "complete" || !r.trial) {
      this.state = "complete";
      this.trial = null;
      return this.state;
    }
    this.trial = r.trial;
    this.gate = new LoadGate();
    this.shownAt = this.now();
    this.state = "trial";
    return this.state;
  }

  // Stimulus crops report in through these two; the DOM layer wires them
  // to image onload/onerror events.
  imageLoaded(side: Side): void {
    this.gate.markLoaded(side);
  }

  imageFailed(): void {
    this.gate.markFailed();
    if (this.state === "trial") this.state = "error";
  }

  buildVote(side: Side): VoteSubmission {
    if (!this.trial) throw new Error("no trial on screen");
    const duration = Math.max(0, Math.round(this.now() - this.shownAt));
    return {
      worker_id: this.workerId,
      set_id: this.trial.set_id,
      pair: this.trial.pair,
      left_item: this.trial.left_item,
      choice: chosenItem(this.trial, side),
      duration_ms: duration,
    };
  }

  async choose(side: Side): Promise<SessionState> {
    if (this.state !== "trial" || !this.trial) {
      return this.state; // double click or stale event: absorbed
    }
    if (!this.gate.ready) {
      return this.state; // crops not loaded yet: no vote possible
    }
    const trialId = this.trial.trial_id;
    if (this.submitted.has(trialId)) {
      return this.state;
    }
    const vote = this.buildVote(side);
    this.state = "submitting";
    this.submitted.add(trialId);
    try {
      await this.transport.vote(vote); // "duplicate" is fine: vote exists
    } catch {
      this.submitted.delete(trialId);
      this.state = "error";
      return this.state;
    }
    return this.loadNext();
  }

  async retry(): Promise<SessionState> {
    return this.loadNext();
  }
}
