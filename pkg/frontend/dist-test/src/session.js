// Rating-session state machine, independent of the DOM.
//
// States: loading -> trial -> (submitting) -> loading -> ... -> complete,
// with an error state for unloadable images.  A choice can only be
// submitted once both crops have loaded, and only one vote per trial is
// ever sent from a healthy session; a duplicate response from the server
// (e.g. after a retried submission) is absorbed by moving on.
import { chosenItem, } from "./types.js";
export class LoadGate {
    leftLoaded = false;
    rightLoaded = false;
    failed = false;
    markLoaded(side) {
        if (side === "left")
            this.leftLoaded = true;
        else
            this.rightLoaded = true;
    }
    markFailed() {
        this.failed = true;
    }
    get ready() {
        return this.leftLoaded && this.rightLoaded && !this.failed;
    }
    get broken() {
        return this.failed;
    }
}
export class RaterSession {
    transport;
    workerId;
    now;
    state = "loading";
    trial = null;
    progress = null;
    gate = new LoadGate();
    shownAt = 0;
    submitted = new Set();
    constructor(transport, workerId, now = () => Date.now()) {
        this.transport = transport;
        this.workerId = workerId;
        this.now = now;
    }
    async loadNext() {
        this.state = "loading";
        let r;
        try {
            r = await this.transport.next(this.workerId);
        }
        catch {
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
    imageLoaded(side) {
        this.gate.markLoaded(side);
    }
    imageFailed() {
        this.gate.markFailed();
        if (this.state === "trial")
            this.state = "error";
    }
    buildVote(side) {
        if (!this.trial)
            throw new Error("no trial on screen");
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
    async choose(side) {
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
        }
        catch {
            this.submitted.delete(trialId);
            this.state = "error";
            return this.state;
        }
        return this.loadNext();
    }
    async retry() {
        return this.loadNext();
    }
}
