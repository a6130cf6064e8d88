export type Phase = 'relevance' | 'truth';

export interface TaskTweet {
  id: string;
  text: string;
  urls: string[];
  date: string | null;
  tweet_url: string;
}

export interface Task {
  tweet: TaskTweet;
  phase: Phase;
  assigned_to: string;
  assigned_at: string;
}

export type FilterValue = 'relevant' | 'non-indonesia' | 'out-of-topic';
export type FactualClaimValue = 'true' | 'not-sure' | 'false';
export type TruthValue = 'true' | 'misinformation' | 'not-sure' | 'need-expert';

export interface RelevanceSubmission {
  phase: 'relevance';
  tweet_id: string;
  annotator_id: string;
  filter: FilterValue;
  personal?: boolean;
  humor?: boolean;
  factual_claim?: FactualClaimValue;
}

export interface TruthSubmission {
  phase: 'truth';
  tweet_id: string;
  annotator_id: string;
  truth: TruthValue;
}

export type Submission = RelevanceSubmission | TruthSubmission;

export interface Progress {
  phase: Phase;
  total: number;
  fully_annotated: number;
  per_annotator: Record<string, number>;
}
