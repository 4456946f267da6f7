/** Wire types of the annotation service API. */

export type LayerName = "Target" | "FE" | "GF" | "PT" | "Sumo";

export const LAYERS: LayerName[] = ["Target", "FE", "GF", "PT", "Sumo"];

export interface SegmentPayload {
  surface: string;
  pos: string;
  gloss: string;
  role: string;
}

export interface TokenPayload {
  token_id: string;
  surface: string;
  span: [number, number];
  lemma: string;
  pos: string;
  pos_display: string;
  gloss: string;
  features: string;
  segments: SegmentPayload[];
}

export interface ArcPayload {
  head: string;
  dep: string;
  relation: string;
}

export interface RealizationPayload {
  relation: string;
  token_id: string;
  segment: number;
}

export interface ConstituentPayload {
  char_span: [number, number];
  pt: string;
  head: string;
  prep: string | null;
}

export interface SentencePayload {
  sentence_id: string;
  text: string;
  tokens: TokenPayload[];
  arcs: ArcPayload[];
  root: string | null;
  realizations: RealizationPayload[];
  constituents: ConstituentPayload[];
}

export interface CorpusPayload {
  name: string;
  corpus_id: string;
  sub_cid: string;
  pattern: string | null;
  paragraphs: number;
  sentences: string[];
}

export interface FrameElementPayload {
  name: string;
  core: string;
}

export interface ExemplarLabelPayload {
  fe: string;
  start: number;
  end: number;
}

export interface ExemplarPayload {
  text: string;
  target: string;
  labels: ExemplarLabelPayload[];
}

export interface FramePayload {
  name: string;
  definition: string;
  fes: FrameElementPayload[];
  lus: { id: string; lemma: string; pos: string }[];
  exemplars: ExemplarPayload[];
}

export interface LabelPayload {
  value: string;
  start?: number;
  end?: number;
  segref?: string;
  itype?: string;
  prep?: string;
}

export interface AsetPayload {
  aset_id: string;
  lu_id: string;
  frame: string;
  sentence_id: string;
  voice: string;
  status: string;
  revision: number;
  layers: Partial<Record<LayerName, LabelPayload[]>>;
}

export interface ViolationPayload {
  kind: string;
  message: string;
}

export interface ValidateResponse {
  aset_id: string;
  revision: number;
  valid: boolean;
  violations: ViolationPayload[];
}
