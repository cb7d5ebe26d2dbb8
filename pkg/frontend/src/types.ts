// Wire types shared with the vote-collection service.

export interface TrialImages {
  gt_full: string;
  gt_crop: string;
  left: string;
  right: string;
}

export interface TrialView {
  trial_id: number;
  set_id: string;
  pair: [number, number];
  left_item: number;
  votes_target: number;
  images: TrialImages;
}

export interface Progress {
  total_trials: number;
  votes_recorded: number;
  votes_target_total: number;
  complete: boolean;
  worker_answered: number;
}

export interface NextResponse {
  status: "ok" | "complete";
  trial?: TrialView;
  progress: Progress;
}

export interface VoteSubmission {
  worker_id: string;
  set_id: string;
  pair: [number, number];
  left_item: number;
  choice: number;
  duration_ms: number;
}

export type VoteOutcome = "accepted" | "duplicate";

export type Side = "left" | "right";

export function rightItem(t: TrialView): number {
  return t.left_item === t.pair[0] ? t.pair[1] : t.pair[0];
}

export function chosenItem(t: TrialView, side: Side): number {
  return side === "left" ? t.left_item : rightItem(t);
}
